"""Radial finite-volume discretization of the disk pencil per angular mode.

A mode-n field v(r) e^{i n theta} on the unit disk is sampled at the
cell centers r_j = (j - 1/2)/N plus one extra trace degree of freedom at
r = 1 (the dynamic boundary value).  The pencil

    P(z) = K + z D + z^2 M

collects, with the angular factor already integrated out (2 pi per mode):

    v* K v = 2 pi ( int (|v'|^2 + n^2 |v|^2 / r^2) r dr + n^2 |v_B|^2 )
    v* D v = 2 pi |v_B|^2
    v* M v = 2 pi ( int |v|^2 r dr + |v_B|^2 )

K is assembled in energy (flux) form, hence exactly symmetric and
positive semidefinite with kernel = constants for n = 0; the face at
r = 0 carries weight zero, which is the natural closure of the polar
Laplacian at the axis.  All three matrices are tridiagonal in the
ordering (interior cells, trace), so every solve below is banded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cholesky_banded, cho_solve_banded, solve_banded

from .bessel import TAU
from .errors import InvalidArgumentError, NumericalFailureError

_MIN_CELLS = 16
_SIGMA_RTOL = 1e-6
_SIGMA_MAX_ITER = 400


@dataclass(frozen=True)
class RadialGrid:
    """Cell-centered radial grid with a separate Wentzell trace node."""

    n: int
    points: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidArgumentError("angular mode n must be nonnegative")
        if self.points < _MIN_CELLS:
            raise InvalidArgumentError(f"need at least {_MIN_CELLS} radial cells")

    @property
    def h(self) -> float:
        return 1.0 / self.points

    @property
    def nodes(self) -> np.ndarray:
        return (np.arange(1, self.points + 1) - 0.5) * self.h


@dataclass
class DiscretePencil:
    """Tridiagonal realization of K + z D + z^2 M for one angular mode.

    K is stored as (diagonal, superdiagonal); D and M are diagonal.
    """

    grid: RadialGrid
    k_diag: np.ndarray
    k_off: np.ndarray
    d_diag: np.ndarray
    m_diag: np.ndarray

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def size(self) -> int:
        return self.grid.points + 1

    def k_matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.k_diag * v
        out[:-1] += self.k_off * v[1:]
        out[1:] += self.k_off * v[:-1]
        return out

    def k_dense(self) -> np.ndarray:
        m = np.diag(self.k_diag)
        idx = np.arange(self.size - 1)
        m[idx, idx + 1] = self.k_off
        m[idx + 1, idx] = self.k_off
        return m

    def h_norm(self, v: np.ndarray) -> float:
        """Discrete H-norm ||v||_M."""
        return math.sqrt(float(np.real(np.vdot(v, self.m_diag * v))))

    def pencil_bands(self, z: complex) -> np.ndarray:
        """(3, size) banded storage of K + z D + z^2 M for solve_banded."""
        n = self.size
        ab = np.zeros((3, n), dtype=np.complex128)
        ab[0, 1:] = self.k_off
        ab[1, :] = self.k_diag + z * self.d_diag + z * z * self.m_diag
        ab[2, :-1] = self.k_off
        return ab


def assemble(n: int, N: int) -> DiscretePencil:
    """Assemble the mode-n pencil on N radial cells plus the trace node.

    Interior faces sit at r = j/N with flux weight 2 pi r_face / h; the
    boundary face couples the last cell to the trace across the half gap
    h/2 with face weight r_N = 1 - h/2 (this particular weight makes the
    leading boundary-row defect contract, via the radial ODE and the
    trace balance, to (h/4) * i * lambda * v(1)).
    """
    grid = RadialGrid(n=n, points=N)
    h = grid.h
    r = grid.nodes
    size = N + 1

    k_diag = np.zeros(size)
    k_off = np.zeros(size - 1)

    faces = np.arange(1, N) * h          # interior faces r = j h
    w = TAU * faces / h
    k_diag[:N - 1] += w
    k_diag[1:N] += w
    k_off[:N - 1] = -w

    w_b = TAU * r[-1] / (h / 2.0)        # boundary face across the half gap
    k_diag[N - 1] += w_b
    k_diag[N] += w_b
    k_off[N - 1] = -w_b

    if n > 0:
        k_diag[:N] += TAU * n * n * h / r
        k_diag[N] += TAU * n * n

    d_diag = np.zeros(size)
    d_diag[N] = TAU

    m_diag = np.empty(size)
    m_diag[:N] = TAU * r * h
    m_diag[N] = TAU

    return DiscretePencil(grid=grid, k_diag=k_diag, k_off=k_off,
                          d_diag=d_diag, m_diag=m_diag)


def apply_pencil(pencil: DiscretePencil, z: complex, v: np.ndarray) -> np.ndarray:
    """(K + z D + z^2 M) v."""
    v = np.asarray(v)
    if v.shape != (pencil.size,):
        raise InvalidArgumentError(
            f"state has shape {v.shape}, pencil expects ({pencil.size},)")
    return pencil.k_matvec(v) + z * (pencil.d_diag * v) + (z * z) * (pencil.m_diag * v)


def pencil_residual(pencil: DiscretePencil, z: complex, v: np.ndarray) -> float:
    """Relative pencil residual of a trial eigenpair (z, v).

    The raw image P(z)v consists of weak-form (stiffness) rows, so it is
    measured in the energy-dual norm ||.||_{(K+M)^{-1}} and normalized by
    the trial vector's H-norm and the pencil scale 1 + |z|^2:

        rho = ||P(z) v||_{(K+M)^{-1}} / (||v||_M * sqrt(1 + |z|^2)).

    For sampled analytic eigenfunctions this reproduces the second-order
    truncation scale h^2 lambda^2 / 12.
    """
    r = apply_pencil(pencil, z, v)
    n = pencil.size
    ab = np.zeros((2, n))
    ab[0, 1:] = pencil.k_off
    ab[1, :] = pencil.k_diag + pencil.m_diag
    cb = cholesky_banded(ab, lower=False)
    y = cho_solve_banded((cb, False), r)
    dual = math.sqrt(max(float(np.real(np.vdot(r, y))), 0.0))
    scale = pencil.h_norm(v) * math.sqrt(1.0 + abs(z) ** 2)
    if scale == 0.0:
        raise InvalidArgumentError("zero trial vector")
    return dual / scale


def _sigma_min(pencil: DiscretePencil, z: complex, rng: np.random.Generator,
               rtol: float = _SIGMA_RTOL) -> float:
    """Smallest singular value of M^{-1/2} P(z) M^{-1/2}.

    Inverse power iteration on the normal system S^H S via two banded
    solves per step; raises LinAlgError-like failures as +inf upstream.
    """
    sqrt_m = np.sqrt(pencil.m_diag)
    n = pencil.size
    ab = pencil.pencil_bands(z)
    # symmetric similarity: S = M^{-1/2} P M^{-1/2}
    ab[1, :] /= pencil.m_diag
    ab[0, 1:] /= sqrt_m[1:] * sqrt_m[:-1]
    ab[2, :-1] /= sqrt_m[1:] * sqrt_m[:-1]
    ab_h = np.empty_like(ab)            # bands of S^H = conj(S) (S symmetric)
    ab_h[0] = np.conj(ab[0])
    ab_h[1] = np.conj(ab[1])
    ab_h[2] = np.conj(ab[2])

    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    sigma = np.inf
    for _ in range(_SIGMA_MAX_ITER):
        w = solve_banded((1, 1), ab_h, v)
        x = solve_banded((1, 1), ab, w)
        mu = np.linalg.norm(x)
        if not np.isfinite(mu) or mu == 0.0:
            raise NumericalFailureError("inverse iteration broke down")
        new_sigma = 1.0 / math.sqrt(mu)
        v = x / mu
        if abs(new_sigma - sigma) <= rtol * new_sigma:
            return new_sigma
        sigma = new_sigma
    return sigma


def resolvent_norm(n_max: int, lam: float, N: int,
                   rtol: float = _SIGMA_RTOL) -> tuple[float, bool]:
    """Discrete ||P(i lambda)^{-1}|| in the H-operator norm.

    Maximizes 1/sigma_min(M^{-1/2} P(i lambda) M^{-1/2}) over angular
    modes n in [0, n_max].  Returns (norm, singular_flag); an exactly
    singular pencil (lambda on a discrete eigenvalue to rounding) is
    reported as (inf, True) rather than raised.
    """
    if not (1.0 <= lam <= 500.0):
        raise InvalidArgumentError("lambda must lie in [1, 500]")
    if n_max < 0:
        raise InvalidArgumentError("n_max must be nonnegative")
    z = 1j * lam
    best = 0.0
    singular = False
    for n in range(n_max + 1):
        pencil = assemble(n, N)
        rng = np.random.default_rng(12345 + n)
        try:
            sigma = _sigma_min(pencil, z, rng, rtol)
        except (NumericalFailureError, np.linalg.LinAlgError):
            singular = True
            continue
        if sigma <= 0.0 or not np.isfinite(sigma):
            singular = True
            continue
        best = max(best, 1.0 / sigma)
    if singular and best == 0.0:
        return math.inf, True
    return (math.inf, True) if singular else (best, False)


def discrete_eigenvalue(pencil: DiscretePencil, z0: complex,
                        tol: float = 1e-12, max_iter: int = 60
                        ) -> tuple[complex, np.ndarray]:
    """Discrete pencil eigenvalue nearest the shift z0.

    Alternates shifted inverse iteration with the Rayleigh functional of
    the complex-symmetric pencil: with u the current vector, z is updated
    to the root of (u^T M u) z^2 + (u^T D u) z + (u^T K u) closest to the
    previous iterate (bilinear forms, no conjugation).
    """
    z = complex(z0)
    rng = np.random.default_rng(7)
    u = rng.standard_normal(pencil.size) + 1j * rng.standard_normal(pencil.size)
    u /= pencil.h_norm(u)
    for _ in range(max_iter):
        ab = pencil.pencil_bands(z)
        try:
            x = solve_banded((1, 1), ab, pencil.m_diag * u)
        except np.linalg.LinAlgError:
            break  # z landed exactly on the eigenvalue
        u = x / pencil.h_norm(x)
        a = complex(u @ (pencil.m_diag * u))
        b = complex(u @ (pencil.d_diag * u))
        c = complex(u @ pencil.k_matvec(u))
        disc = np.sqrt(b * b - 4.0 * a * c + 0j)
        cand = [(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)]
        z_new = min(cand, key=lambda w: abs(w - z))
        if abs(z_new - z) <= tol * (1.0 + abs(z_new)):
            return z_new, u
        z = z_new
    return z, u


def discrete_energy(pencil: DiscretePencil, u: np.ndarray,
                    v: np.ndarray) -> tuple[float, float]:
    """(E, E1) of a state (u, v) with v the velocity.

    E  = (u*Ku + v*Mv)/2;
    E1 = (v*Kv + ||M^{-1} K u||_M^2 + v*Mv)/2, the discrete surrogate of
    <Av, v> + ||Au||^2 + ||v||^2 controlling the higher-order energy.
    """
    u = np.asarray(u, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    ku = pencil.k_matvec(u)
    e = 0.5 * float(np.real(np.vdot(u, ku)) + np.real(np.vdot(v, pencil.m_diag * v)))
    au = ku / pencil.m_diag                      # strong form M^{-1} K u
    e1 = 0.5 * float(np.real(np.vdot(v, pencil.k_matvec(v)))
                     + np.real(np.vdot(au, pencil.m_diag * au))
                     + np.real(np.vdot(v, pencil.m_diag * v)))
    return e, e1


def dirichlet_blocks(pencil: DiscretePencil) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Interior (v_B = 0) stiffness bands and mass diagonal."""
    N = pencil.grid.points
    kd = pencil.k_diag[:N].copy()
    ko = pencil.k_off[:N - 1].copy()
    md = pencil.m_diag[:N].copy()
    return kd, ko, md


def _tridiag_matvec(diag: np.ndarray, off: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = diag * v
    out[:-1] += off * v[1:]
    out[1:] += off * v[:-1]
    return out


@dataclass
class HautusReport:
    """Empirical observability (Hautus) constants per frequency."""

    lambdas: list[float] = field(default_factory=list)
    max_ratios: list[float] = field(default_factory=list)
    samples: int = 0
    reference: float = 0.0     # fitted constant at the smallest lambda

    @property
    def overall_max(self) -> float:
        return max(self.max_ratios)

    @property
    def ok(self) -> bool:
        return self.overall_max <= 10.0 * self.reference


def hautus_ratio(kd: np.ndarray, ko: np.ndarray, md: np.ndarray,
                 h_grid: float, w: np.ndarray, lam: float) -> float:
    """Observability quotient of one Dirichlet field at frequency lambda.

    rho = ||w||_{H^1_h} / ( h^{-1} ||(-h^2 Lap_h - 1) w||_M + h ||d_nu w|| ),
    h = 1/lambda; w is normalized internally, the zero vector is rejected.
    """
    norm2 = float(w @ (md * w))
    if norm2 == 0.0:
        raise InvalidArgumentError("zero probe vector")
    w = w / math.sqrt(norm2)
    h = 1.0 / lam
    kw = _tridiag_matvec(kd, ko, w)
    h1h = math.sqrt(float(h * h * (w @ kw) + w @ (md * w)))
    resid = h * h * (kw / md) - w
    vol = math.sqrt(float(resid @ (md * resid)))
    n_cells = md.shape[0]
    dnu = (w[n_cells - 2] - 9.0 * w[n_cells - 1]) / (3.0 * h_grid)
    bnd = math.sqrt(TAU) * abs(dnu)
    return h1h / (vol / h + h * bnd)


def hautus_probe(lambda_list, N: int, samples: int, seed: int = 0,
                 n: int = 0) -> HautusReport:
    """Empirical Hautus-inequality constants on random Dirichlet fields.

    For each lambda (semiclassical h = 1/lambda) draws `samples` random
    interior vectors w (trace forced to zero), smooths them with two
    damped Jacobi sweeps of the Dirichlet stiffness to suppress
    grid-frequency content the discrete Laplacian misrepresents, and
    evaluates

        rho = ||w||_{H^1_h} / ( h^{-1} ||(-h^2 Lap_h - 1) w|| + h ||d_nu w|| )

    with ||w||_{H^1_h}^2 = h^2 w*K_D w + w*M w, Lap_h = -M^{-1} K_D, the
    normal derivative by the one-sided second-order trace stencil, and
    boundary measure weight 2 pi.  Reports the max ratio per lambda and
    checks the overall max stays within a decade of the constant fitted
    at the smallest lambda.
    """
    lambdas = sorted(float(l) for l in lambda_list)
    if not lambdas:
        raise InvalidArgumentError("need at least one lambda")
    if samples < 1:
        raise InvalidArgumentError("need at least one probe per lambda")
    pencil = assemble(n, N)
    kd, ko, md = dirichlet_blocks(pencil)
    h_grid = pencil.grid.h
    rng = np.random.default_rng(seed)

    report = HautusReport(samples=samples)
    for lam in lambdas:
        worst = 0.0
        for _ in range(samples):
            w = rng.standard_normal(N)
            for _ in range(2):                    # damped Jacobi smoothing
                w = w - (2.0 / 3.0) * _tridiag_matvec(kd, ko, w) / kd
            worst = max(worst, hautus_ratio(kd, ko, md, h_grid, w, lam))
        report.lambdas.append(lam)
        report.max_ratios.append(worst)
    report.reference = report.max_ratios[0]
    return report


def write_resolvent_csv(path, rows) -> None:
    """resolvent.csv rows: (lambda, n_max, grid_n, norm, flag_singular)."""
    def fmt(x: float) -> str:
        return format(x, ".17g")

    lines = ["lambda,n_max,grid_n,norm,flag_singular"]
    for lam, n_max, grid_n, norm, flag in rows:
        lines.append(",".join([fmt(lam), str(n_max), str(grid_n),
                               fmt(norm) if math.isfinite(norm) else "inf",
                               "true" if flag else "false"]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_hautus_csv(path, report: HautusReport) -> None:
    def fmt(x: float) -> str:
        return format(x, ".17g")

    lines = ["lambda,max_ratio,samples"]
    for lam, ratio in zip(report.lambdas, report.max_ratios):
        lines.append(f"{fmt(lam)},{fmt(ratio)},{report.samples}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
