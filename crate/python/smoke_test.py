"""Exercise the Python bindings end to end. Exits nonzero on the first failure."""

import json
from fractions import Fraction

import toda2d_py as t


def main():
    s = t.State.random(7, 4, 3, seed=1)
    assert (s.period, s.depth, s.depth_bar) == (7, 4, 3)
    assert t.State.from_json(s.to_json()) == s

    z = t.State(5, 3, 1)
    z.set_field("u-1", [Fraction(1, 2), 3, -1, 0, 2])
    assert z.field("u-1")[1] == 3
    assert t.bracket(2, "u0", 0, "u0", 1, z) == 3

    for k in (1, 2, 3):
        formula = t.bracket(k, "u0", 2, "ubar-1", 3, s)
        assert formula == t.tensor_bracket(k, "u0", 2, "ubar-1", 3, s), k
    assert len(t.bracket_terms(1, "u0", "ubar-1")) > 0

    x = t.DiffOp(7, {0: [1, 0, 2, 0, -1, 0, 0], -1: ["1/3"] * 7})
    y = t.DiffOp(7, {1: [0, 1, 0, 0, 0, 0, 5]})
    assert (x * y - y * x) == x.commutator(y)
    assert x.plus().degrees() == [0]
    assert (x + y).trace() == x.trace()

    p = t.Pair(x, y)
    q = t.Pair(y, x)
    for m in ("R", "A"):
        assert t.Pair.myb_residual(p, q, m).is_zero(), m
    assert p.r_matrix().inner_product(q) == p.inner_product(q.r_adjoint())

    assert s.hamiltonian("h0") == sum(s.field("u0"), Fraction(0))

    report = t.verify("myb", n=5, samples=5)
    assert report["passed"], json.dumps(report)[:400]

    traj = t.evolve("t1", 0.1, 1e-3, ledger=["h1"], n=6)
    h = [snap["hamiltonians"][0] for snap in traj["snapshots"]]
    assert max(abs(v - h[0]) for v in h) < 1e-9 * max(1.0, abs(h[0]))

    check = t.toda_check(n=8, step=1e-2)
    assert 3.5 < check["ratio"] < 4.5, check

    try:
        t.verify("myb", n=4)
    except ValueError:
        pass
    else:
        raise AssertionError("N=4 accepted")
    try:
        z.set_field("u-1", ["x"] * 5)
    except ValueError:
        pass
    else:
        raise AssertionError("non-rational accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
