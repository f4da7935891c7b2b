"""Smoke test for the navlogic Python module.

Build the extension and place it next to this script first:

    cargo build --release -p navlogic-py --features extension-module
    cp target/release/libnavlogic_py.so python/navlogic.so
"""

import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, HERE)

import navlogic  # noqa: E402

T0 = os.path.join(HERE, "..", "crates", "core", "fixtures", "t0.system")


def main():
    t0 = navlogic.System.from_file(T0)
    assert t0.views == ["vA", "vC", "vE", "vF", "vG", "vH"], t0.views
    assert t0.classes[0] == ["a", "b"]
    assert t0.successors("a", "0") == ["g"]

    assert navlogic.table(t0)[0] == ["m", "m", "r", "r", "m", "r"]
    assert navlogic.evaluate(t0, "{vA} |> {vE}", "recall")
    assert not navlogic.evaluate(t0, "{vA} |> {vE}", "memoryless")
    assert navlogic.format_formula("!({vA}|>{vE})->({vA}|>{vG})") == "!({vA} |> {vE}) -> {vA} |> {vG}"

    machine = navlogic.synth(t0, "vA", ["vE"], "recall")
    assert machine is not None and navlogic.verify(t0, machine, "vA", "vE", "recall")
    assert navlogic.synth(t0, "vA", "vE", "memoryless") is None
    assert navlogic.recall_oracle(t0, "vA", "vE")

    hyps = ["{x}|>{y}", "{y}|>{z}"]
    assert navlogic.derives("recall", hyps, "{x}|>{z}")
    assert not navlogic.derives("memoryless", hyps, "{x}|>{z}")
    proof = navlogic.derive_proof("recall", hyps, "{x}|>{z}")
    assert navlogic.check_proof("recall", proof)
    assert navlogic.derive_proof("memoryless", hyps, "{x}|>{z}") is None

    model = navlogic.canonical_system("memoryless", "x,y", ["{x}|>{y}"])
    assert navlogic.evaluate(model, "{x} |> {y}", "memoryless")
    assert not navlogic.evaluate(model, "{y} |> {x}", "memoryless")

    r = navlogic.random_system(7)
    assert navlogic.System(r.to_text()) == r

    code, out, err = navlogic.run_cli(["check", T0, "{vA} |> {vE}", "--kind", "memoryless"])
    assert (code, out, err) == (1, "false\n", ""), (code, out, err)

    try:
        navlogic.evaluate(t0, "{} |> {vA}", "recall")
    except ValueError as e:
        assert "empty view set" in str(e)
    else:
        raise AssertionError("empty set accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
