use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown view `{0}`")]
    UnknownView(String),
    #[error("unknown instruction `{0}`")]
    UnknownInstruction(String),
    #[error("no observation class with members {0}")]
    UnknownClass(String),
    #[error("state `{state}` has no transition for instruction `{instruction}`")]
    MissingTransition { state: String, instruction: String },
    #[error("edge from `{state}` under `{instruction}` has no destination")]
    EmptySuccessorSet { state: String, instruction: String },
    #[error("system declares no instructions")]
    NoInstructions,
    #[error("system declares no states")]
    NoStates,
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("syntax error at offset {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("empty view set at offset {0}")]
    EmptySet(usize),
    #[error("malformed state/instruction sequence: {0}")]
    MalformedSequence(String),
    #[error("sequence is not a history of the system")]
    NotAHistory,
    #[error("strategy is not total: {0}")]
    PartialStrategy(String),
    #[error("budget exceeded: {what} needs {needed}, bound is {bound}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        bound: u128,
    },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
