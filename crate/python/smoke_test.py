#!/usr/bin/env python3
"""Smoke test for the sslevel_py extension module.

Build and install the module first, e.g.:

    pip install maturin --quiet
    maturin develop -m crates/py/Cargo.toml --release

or copy the built cdylib next to this script as sslevel_py.so.
"""

import sslevel_py as ss


def main() -> None:
    # Counting utilities.
    assert ss.class_number(-183) == 8
    assert ss.class_number(-732) == 8
    assert ss.class_number(-1220) == 16
    assert ss.alpha_exact(61, 3) == 8
    assert ss.alpha_exact(61, 5) == 8
    lower = ss.ehlmp_lower_bound(61, 3)
    assert 0.3 < lower < 0.4

    # Reference session at p = 61, N = 2: five curves, 15 classes, the
    # published fiber-size multiset.
    s = ss.Session(61, 2, reference=True)
    assert sorted(s.j_invariants()) == sorted(["9", "41", "50", "20s+32", "41s+52"])
    assert len(s.classes()) == 15
    sizes = sorted(size for size, _, _ in s.fibers())
    assert sizes == [1, 2, 2, 2, 4, 4]
    f1, f2, f4, t, s_p = s.census()
    assert (f1, f2, f4, t, s_p) == (1, 3, 2, 6, 5)

    # Direct enumeration agrees with the class-number formula.
    s3 = ss.Session(61, 3, reference=True)
    alpha, alpha_prime = s3.alpha_enumerated()
    assert alpha == ss.alpha_exact(61, 3) == 8
    assert alpha_prime == 4

    # The p = 37 reference graph: 12 vertices, connected, DOT export.
    g = ss.Session(37, 3, ell=2, reference=True)
    assert g.components() == 1
    dot = g.graph_dot(undirected=True)
    assert dot.startswith("graph") and dot.count("label=\"(E_") == 12

    print("smoke test passed:", repr(s))


if __name__ == "__main__":
    main()
