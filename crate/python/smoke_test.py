"""Smoke test for the tchakaloff extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/tchakaloff-*.whl
"""

import math

import tchakaloff as tk


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    assert tk.basis_dim(2, 3) == 10
    assert tk.enumerate_monomials(2, 1) == [[0, 0], [1, 0], [0, 1]]
    assert tk.evaluate_basis(2, 2, [2.0, 3.0]) == [1.0, 2.0, 3.0, 4.0, 6.0, 9.0]
    assert close(tk.analytic_moments(1, 3)[3], 0.25)

    simpson = tk.subsample([[0.0], [0.5], [1.0]], 3)
    nodes = [x[0] for x in simpson.nodes]
    weights = dict(zip(nodes, simpson.weights))
    assert close(weights[0.5], 2.0 / 3.0) and close(weights[0.0], 1.0 / 6.0)

    cub = tk.construct_exact(2, 2, seed=7)
    assert len(cub) <= 6
    report = tk.verify(cub, 2)
    assert report["passed"], report["failures"]
    assert close(cub.integrate_monomial([1, 1]), 0.25)
    again = tk.Cubature.from_text(cub.to_text())
    assert again.weights == cub.weights

    pts = tk.sample_uniform_cube(2, 2000, seed=1)
    comp = tk.compress_empirical(pts, 2)
    mean_xy = sum(x * y for x, y in pts) / len(pts)
    assert len(comp) <= 6
    assert close(comp.integrate_monomial([1, 1]), mean_xy, 1e-9)

    prod = tk.product_cubature(simpson, 2)
    assert len(prod) == 9
    assert close(tk.integrate(prod, [x * x * y for x, y in prod.nodes]), 1.0 / 6.0)

    assert tk.membership_test([[1.0, 0.0], [0.0, 1.0]], [0.3, 0.7])
    assert not tk.membership_test([[1.0, 0.0], [0.0, 1.0]], [-0.3, 0.7])
    bfs = tk.find_bfs([[1.0, 1.0, 1.0], [0.0, 0.5, 1.0]], [1.0, 0.5])
    assert bfs["status"] == "feasible" and bfs["residual"] <= 1e-9

    n = tk.estimate_n(1, 2, seed=3)
    assert n is not None and 3 <= n <= 18

    try:
        tk.basis_dim(0, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    assert not math.isnan(cub.residual)
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
