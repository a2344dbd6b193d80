"""Shared helpers: independent oracles and random-cycle generation."""

import cmath

import numpy as np

from hetstab import ConnectionSpec, CycleSpec, NodeSpec, ValidatedCycle, validate_cycle


def naive_matmul(A, B) -> np.ndarray:
    """Triple-loop matrix product, independent of numpy's matmul path."""
    A = [[float(v) for v in row] for row in np.asarray(A)]
    B = [[float(v) for v in row] for row in np.asarray(B)]
    n, k, m = len(A), len(B), len(B[0])
    out = [[0.0] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            acc = 0.0
            for t in range(k):
                acc += A[i][t] * B[t][j]
            out[i][j] = acc
    return np.array(out)


def det3(M) -> float:
    M = np.asarray(M, float)
    return float(
        M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
        - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
        + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
    )


def charpoly_eigenvalues(M) -> list[complex]:
    """Closed-form characteristic-polynomial roots for N <= 3.

    Quadratic formula for N = 2 and Cardano's method for N = 3; no calls
    into any eigenvalue routine.
    """
    M = np.asarray(M, float)
    n = M.shape[0]
    if n == 1:
        return [complex(M[0, 0])]
    if n == 2:
        tr = M[0, 0] + M[1, 1]
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        disc = cmath.sqrt(tr * tr - 4.0 * det)
        return [(tr + disc) / 2.0, (tr - disc) / 2.0]
    if n == 3:
        # lambda^3 + a lambda^2 + b lambda + c
        a = -float(np.trace(M))
        b = float(
            (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
            + (M[0, 0] * M[2, 2] - M[0, 2] * M[2, 0])
            + (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
        )
        c = -det3(M)
        # depressed cubic t^3 + p t + q, lambda = t - a/3
        p = b - a * a / 3.0
        q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
        disc = cmath.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
        u = (-q / 2.0 + disc) ** (1.0 / 3.0)
        if abs(u) < 1e-30:
            u = (-q / 2.0 - disc) ** (1.0 / 3.0)
        if abs(u) < 1e-30:
            ts = [0.0 + 0.0j] * 3
        else:
            v = -p / (3.0 * u)
            w = cmath.exp(2j * cmath.pi / 3.0)
            ts = [u + v, u * w + v / w, u * w**2 + v / w**2]
        return [t - a / 3.0 for t in ts]
    raise ValueError("closed form implemented for N <= 3 only")


def assert_multisets_close(a, b, tol=1e-9):
    """Greedy nearest matching of two complex multisets within tol."""
    rem = list(b)
    assert len(a) == len(rem)
    for x in a:
        i = min(range(len(rem)), key=lambda k: abs(rem[k] - x))
        assert abs(rem[i] - x) <= tol, f"{x} unmatched within {tol} in {list(b)}"
        rem.pop(i)


def random_cycle(rng: np.random.Generator, max_m: int = 5, max_nt: int = 3,
                 sign: str = "any") -> ValidatedCycle:
    """Random valid cycle; sign controls transverse eigenvalue signs.

    sign="negative" keeps every transverse eigenvalue negative (all basic
    matrices non-negative); sign="mixed" forces at least one positive
    transverse eigenvalue somewhere; "any" leaves them unconstrained.
    """
    m = int(rng.integers(1, max_m + 1))
    nt = int(rng.integers(1, max_nt + 1))
    nodes, conns = [], []
    for _ in range(m):
        c = float(rng.uniform(0.6, 1.8))
        e = float(rng.uniform(0.6, 1.8))
        if sign == "negative":
            t = tuple(-float(x) for x in rng.uniform(0.2, 1.2, nt))
        else:
            t = tuple(float(x) for x in rng.uniform(-1.2, 1.2, nt))
        nodes.append(NodeSpec(contracting=c, expanding=e, transverse=t))
        perm = tuple(int(i) for i in rng.permutation(nt + 1))
        scal = tuple(float(s) for s in rng.uniform(0.5, 2.0, nt + 1))
        conns.append(ConnectionSpec(permutation=perm, scalings=scal,
                                    contraction_offset=float(rng.uniform(0.5, 2.0))))
    if sign == "mixed" and all(t < 0 for node in nodes for t in node.transverse):
        node = nodes[0]
        tweaked = (abs(node.transverse[0]),) + node.transverse[1:]
        nodes[0] = NodeSpec(contracting=node.contracting, expanding=node.expanding,
                            transverse=tweaked)
    return validate_cycle(CycleSpec(nodes=tuple(nodes), connections=tuple(conns)))


def dominant_pair_matrix(rng: np.random.Generator, n: int | None = None,
                 lam_range=(1.3, 2.2)) -> tuple[np.ndarray, np.ndarray, float]:
    """Random matrix with a real dominant eigenvalue > 1 and a strictly
    positive dominant eigenvector; returns (M, basis P, lambda_max)."""
    if n is None:
        n = int(rng.integers(2, 5))
    while True:
        P = rng.standard_normal((n, n))
        P[:, 0] = rng.uniform(0.2, 1.0, n)
        if np.linalg.cond(P) < 50.0:
            break
    lam = float(rng.uniform(*lam_range))
    others = rng.uniform(-0.9, 0.9, n - 1)
    D = np.diag(np.concatenate([[lam], others]))
    M = P @ D @ np.linalg.inv(P)
    return M, P, lam
