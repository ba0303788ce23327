"""Smoke test for the `dmst` extension module.

Build and install first:  pip install ./crates/py   (or: maturin develop -m crates/py/Cargo.toml)
"""

import os
import tempfile

import dmst


def main():
    ps = dmst.generate("special", 60, seed=4)
    base = dmst.mst(ps)
    print(f"{ps!r}: MST weight {base.weight(ps):.1f}, max degree {base.max_degree()}")

    for delta in (2, 3, 4):
        for name in dmst.algorithms(delta):
            tree, iterations = dmst.run(name, ps, delta, seed=7, mhc_m=200, mhc_r=20)
            assert tree.feasibility_error(delta) == 0, name
            ratio = tree.weight(ps) / base.weight(ps)
            print(f"  delta={delta} {name:<13} weight ratio {ratio:.4f}  iterations {iterations}")

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "inst.txt")
        dmst.save_instance(path, ps, 4, "special")
        assert dmst.load_instance(path).coords() == ps.coords()

    tiny = dmst.generate("uniform", 7, seed=1)
    exact = dmst.exact_dmst(tiny, 3)
    heuristic, _ = dmst.run("DNLS", tiny, 3)
    assert heuristic.weight(tiny) >= exact.weight(tiny) - 1e-9
    print("ok")


if __name__ == "__main__":
    main()
