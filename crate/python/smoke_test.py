"""Smoke test for the bvkit_py extension module.

Build and install with `pip install --no-build-isolation ./crates/python`
(or `maturin develop -m crates/python/Cargo.toml`), then run this file.
"""

import bvkit_py

SO3 = """
context { x1: deg 0; x2: deg 0; x3: deg 0; }
let pi = -x3*x1'*x2' - x1*x2'*x3' - x2*x3'*x1';
constraint x1^2 + x2^2 + x3^2;
check lam(pi; x1, x2) == x3;
"""

MOYAL = """
context { x: deg 0; y: deg 0; param eps trunc 4; }
let pi = -x'*y';
check star(x, y) - star(y, x) == eps;
"""

NON_POISSON = """
context { x: deg 0; y: deg 0; z: deg 0; }
let pi = x*x'*y' + y*y'*z';
"""

LAGRANGIAN = """
context { x1: deg 0; x2: deg 0; y1: deg 0; y2: deg 0; }
let pi = -x1'*y1' - x2'*y2';
split y1, y2;
"""

BV = """
context { shift -1; x: deg 0; y: deg 0; c: deg 1; param hbar trunc 3; }
let S = c*(y*x' - x*y');
"""


def main():
    so3 = bvkit_py.Session(SO3)
    assert so3.names() == ["pi"]
    assert so3.is_poisson()
    assert all(passed for _, passed, _ in so3.checks())
    assert so3.mc_residual("pi") == "0"
    assert so3.koszul()["pass"] is True

    moyal = bvkit_py.Session(MOYAL)
    assert moyal.checks()[0][1]
    print("x * y =", moyal.eval("star(x, y)"))
    assert moyal.eval("star(x, y) - star(y, x)") == "eps"

    bad = bvkit_py.Session(NON_POISSON)
    assert not bad.is_poisson()
    assert bad.schouten("pi", "pi") != "0"

    lag = bvkit_py.Session(LAGRANGIAN).conormal()
    assert lag["flat"] and lag["mc"]

    bv = bvkit_py.Session(BV)
    assert bv.cme() == "0" and bv.qme() == "0"

    errors = bvkit_py.diagnose("context { t: deg 1; }\nlet f = t^2;\n")
    assert errors and errors[0][:2] == (2, 9), errors
    try:
        bvkit_py.Session("context { x: deg 0; }\nlet f = x * y;\n")
    except ValueError as e:
        print("rejected:", e)
    else:
        raise AssertionError("unknown identifier accepted")

    formatted = bvkit_py.format_script(MOYAL)
    assert bvkit_py.format_script(formatted) == formatted
    print("bvkit_py smoke test passed")


if __name__ == "__main__":
    main()
