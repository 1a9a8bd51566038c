"""Smoke test for the nomfix_py extension.

Build and install first:

    pip install --no-build-isolation -e crates/py
    python3 python/smoke_test.py
"""

import json
import sys

import nomfix_py as nf

COUNTEREXAMPLE = "(a1 a2) fix X1, (a3 a4) fix X1 |- (a1 a3) fix X1"


def main():
    pi = nf.Perm("(a b)")
    t = nf.Term("[a]f(a, X)")
    assert str(t.act(pi)) == "[b]f(b, (a b).X)", t.act(pi)
    assert t.act(pi).act(pi.inverse()) == t
    assert (pi * nf.Perm.swap("b", "c")).apply("c") == "a"
    assert str(t.subst("X := c")) == "[a]f(a, c)"

    v = nf.check("⊢ [a]a = [b]b", system="fix")
    assert v and v.system == "fix"
    tree = json.loads(v.derivation)
    assert tree["rule"] == "perm", tree["rule"]
    assert nf.verify_proof(v.derivation) is None
    assert nf.check("⊢ [a]a ≈ [b]b")
    assert not nf.check("|- a # a", system="fresh")
    assert nf.check(COUNTEREXAMPLE, system="fix")
    assert not nf.check(COUNTEREXAMPLE, system="fix-gvar")
    assert nf.check("|- +(a, b) ~ +(b, a)", theory="c")

    assert nf.translate("fresh-to-fix", "a#X") == "new c1. (a c1) fix X"
    assert nf.translate("fix-to-fresh", "new c1. (a c1) fix X") == "a#X"
    try:
        nf.translate("fix-to-fresh", "new c1,c2. (a c1) fix X, (b c2) fix X |- (a b) fix X")
    except ValueError as e:
        assert "shape error" in str(e)
    else:
        raise AssertionError("expected a shape error")

    assert nf.eval("pfin", "X := {a, b}", "f(X, a)") == "{a}"
    assert nf.eval("singleton", "", "[a]f(a)") == "⋆"
    assert not nf.validity("pfin", "X1 := {a1, a2}", COUNTEREXAMPLE)
    assert not nf.validity("ground-alpha-c", "X1 := +(a1, a2)", COUNTEREXAMPLE)

    gens = [nf.Perm("(a1 a2)"), nf.Perm("(a3 a4)")]
    assert nf.group_contains(gens, nf.Perm("(a1 a2)(a3 a4)"))
    assert not nf.group_contains(gens, nf.Perm("(a1 a3)"))

    problem = "f^C(X, Y) =?= f^C(c, (a b).X) [C]"
    assert nf.validate(problem, "format: fresh-pair\nsubst: X := c; Y := c") == "valid"
    triple = "format: fresh-triple\nsubst: Y := c\nresidual: X = (a b).X"
    assert nf.validate(problem, triple) == "valid-with-residual"

    for name in ["counterexample-pfin", "counterexample-c", "example-7-1", "strong-axioms"]:
        ok, summary, _ = nf.demo(name)
        assert ok, (name, summary)

    print("python smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
