use std::fmt;

use super::{synth_memoryless_classes, synth_recall_classes, Budget};
use crate::error::Result;
use crate::system::{ClassSet, TransitionSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    /// A memoryless strategy exists.
    Memoryless,
    /// A recall strategy exists, a memoryless one does not.
    Recall,
    Neither,
}

impl Cell {
    pub fn symbol(self) -> char {
        match self {
            Cell::Memoryless => 'm',
            Cell::Recall => 'r',
            Cell::Neither => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Cell> {
        match c {
            'm' => Some(Cell::Memoryless),
            'r' => Some(Cell::Recall),
            '-' => Some(Cell::Neither),
            _ => None,
        }
    }
}

/// Navigability between every ordered pair of observation classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NavigabilityTable {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<Cell>>,
}

impl NavigabilityTable {
    pub fn cell(&self, row: usize, col: usize) -> Cell {
        self.cells[row][col]
    }

    pub fn row_symbols(&self, row: usize) -> String {
        self.cells[row]
            .iter()
            .map(|c| c.symbol().to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for NavigabilityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "columns: {}", self.labels.join(" "))?;
        for (r, label) in self.labels.iter().enumerate() {
            writeln!(f, "{label}: {}", self.row_symbols(r))?;
        }
        Ok(())
    }
}

pub fn navigability_table(sys: &TransitionSystem, budget: &Budget) -> Result<NavigabilityTable> {
    let k = sys.num_classes();
    let labels = (0..k).map(|c| sys.class_label(c)).collect();
    let mut cells = vec![vec![Cell::Neither; k]; k];
    for (x, row) in cells.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            let (a, b) = (ClassSet::from([x]), ClassSet::from([y]));
            *cell = if synth_memoryless_classes(sys, &a, &b, budget)?.is_some() {
                Cell::Memoryless
            } else if synth_recall_classes(sys, &a, &b, budget)?.is_some() {
                Cell::Recall
            } else {
                Cell::Neither
            };
        }
    }
    Ok(NavigabilityTable { labels, cells })
}
