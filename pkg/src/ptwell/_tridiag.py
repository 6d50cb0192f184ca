"""Eigenvalues of complex symmetric tridiagonal matrices.

Implicit QL with Wilkinson-type shifts, using complex orthogonal plane
rotations (c**2 + s**2 = 1, no conjugation), which preserve symmetric
tridiagonal form.  O(n^2) for all eigenvalues.  Complex orthogonal
rotations are not unitary, so eigenvalues are afterwards polished by
inverse iteration where accuracy matters.
"""

import numpy as np
import numba
from scipy.linalg import solve_banded


class TridiagonalBreakdown(RuntimeError):
    pass


@numba.njit(cache=True)
def _ql_implicit(d, e, max_iter):
    n = d.shape[0]
    d = d.copy()
    ee = np.zeros(n, np.complex128)
    ee[: n - 1] = e
    eps = np.finfo(np.float64).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(ee[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                return d, -1
            g = (d[l + 1] - d[l]) / (2.0 * ee[l])
            r = np.sqrt(g * g + 1.0)
            if g.real * r.real + g.imag * r.imag < 0.0:
                r = -r
            g = d[m] - d[l] + ee[l] / (g + r)
            s = 1.0 + 0.0j
            c = 1.0 + 0.0j
            p = 0.0j
            i = m - 1
            underflow = False
            while i >= l:
                f = s * ee[i]
                b = c * ee[i]
                r = np.sqrt(f * f + g * g)
                ee[i + 1] = r
                if abs(r) == 0.0:
                    if abs(f) + abs(g) != 0.0:
                        # isotropic vector: complex rotation undefined
                        return d, -2
                    d[i + 1] -= p
                    ee[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            ee[l] = g
            ee[m] = 0.0
    return d, 0


def tridiagonal_eigvals(diag, offdiag, max_iter: int = 60) -> np.ndarray:
    """All eigenvalues of the symmetric tridiagonal matrix (diag, offdiag)."""
    d = np.ascontiguousarray(diag, dtype=np.complex128)
    e = np.ascontiguousarray(offdiag, dtype=np.complex128)
    w, status = _ql_implicit(d, e, max_iter)
    if status == -1:
        raise TridiagonalBreakdown("QL iteration did not converge")
    if status == -2:
        raise TridiagonalBreakdown("complex rotation hit an isotropic vector")
    return w


def polish_eigenvalue(diag, offdiag, lam: complex, iters: int = 3) -> complex:
    """Shifted inverse iteration plus the unconjugated Rayleigh quotient."""
    d = np.asarray(diag, dtype=complex)
    e = np.asarray(offdiag, dtype=complex)
    n = d.size
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = e
    ab[2, :-1] = e
    # a constant start vector is orthogonal to every odd state of a
    # parity-symmetric problem, so use a fixed generic one
    rng = np.random.default_rng(12345)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x /= np.linalg.norm(x)
    for _ in range(iters):
        ab[1] = d - lam
        try:
            y = solve_banded((1, 1), ab, x, check_finite=False)
        except np.linalg.LinAlgError:
            return lam  # shift is an eigenvalue to working precision
        x = y / np.linalg.norm(y)
        tx = d * x
        tx[:-1] += e * x[1:]
        tx[1:] += e * x[:-1]
        den = x @ x
        if den == 0:
            return lam
        lam = (x @ tx) / den
    return complex(lam)
