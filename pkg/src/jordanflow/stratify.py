"""Stratification data: support weights, the min-norm point beta_mu, stratum labels.

Every stored coefficient mu_ij^k contributes the integer diagonal weight
alpha_ij^k = -e_i - e_j + e_k.  The stratum parameter beta_mu is the unique
minimum-norm point of the convex hull of the supported weights, computed by
Wolfe's algorithm; its KKT certificate <beta, alpha> >= ||beta||^2 (with
equality on the active support) is exactly the W_beta membership test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import StructureTensor
from .flow import FlowOptions, run_flow
from .snap import MAX_DENOMINATOR, RationalSnapError, format_fraction, snap_fraction, snap_spectrum

__all__ = [
    "WeightVector",
    "MinNormPoint",
    "StratumLabel",
    "support_weights",
    "min_norm_point",
    "certificate_gap",
    "beta_mu",
    "beta_mu_point",
    "stratum_of",
    "label_from_type",
    "label_from_fractions",
]

LABEL_SNAP_TOL = 1e-4   # flow terminals carry ~1e-5 eigenvalue error; labels are >= 1/(63*64) apart


@dataclass(frozen=True)
class WeightVector:
    """Diagonal of alpha_ij^k = -E_ii - E_jj + E_kk, with the coefficient slots that produce it."""

    diagonal: tuple[int, ...]
    triples: tuple[tuple[int, int, int], ...]   # 1-based (i, j, k), i <= j

    def __post_init__(self):
        if sum(self.diagonal) != -1:
            raise ValueError(f"weight diagonal must sum to -1, got {self.diagonal}")

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.diagonal, dtype=float)


def support_weights(mu: StructureTensor, tol: float = 1e-10) -> list[WeightVector]:
    """Distinct weight vectors of the coefficients with |mu_ij^k| > tol * max|coeff|."""
    mx = float(np.max(np.abs(mu.table)))
    if mx == 0.0:
        raise ValueError("the zero tensor has empty support")
    seen: dict[tuple[int, ...], list[tuple[int, int, int]]] = {}
    for i, j, k, _ in mu.products(tol=tol * mx):
        diag = [0] * mu.dim
        diag[i - 1] -= 1
        diag[j - 1] -= 1
        diag[k - 1] += 1
        seen.setdefault(tuple(diag), []).append((i, j, k))
    return [WeightVector(diag, tuple(triples)) for diag, triples in sorted(seen.items())]


@dataclass(frozen=True)
class MinNormPoint:
    point: np.ndarray
    coefficients: np.ndarray    # barycentric over the input list, zero off the active set
    certificate_gap: float      # min_v <point, v> - ||point||^2, >= -tol at optimality
    major_cycles: int


def certificate_gap(point: np.ndarray, vectors) -> float:
    arr = np.asarray(vectors, dtype=float)
    return float(np.min(arr @ point) - point @ point)


def min_norm_point(vectors, improve_tol: float = 1e-14, max_major: int = 1000) -> MinNormPoint:
    """Wolfe's minimum-norm-point algorithm over conv(vectors).

    Affine-hull subproblems are solved by least squares at double precision;
    the major cycle stops when no vertex improves ||x||^2 by more than
    improve_tol.  Invariant under duplication and reordering of the input.
    """
    pts = np.asarray(vectors, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("need a non-empty list of equal-length vectors")
    count = pts.shape[0]
    active = [int(np.argmin(np.einsum("ij,ij->i", pts, pts)))]
    lam = np.array([1.0])
    x = pts[active[0]].copy()
    majors = 0
    for majors in range(1, max_major + 1):
        dots = pts @ x
        j = int(np.argmin(dots))
        if dots[j] >= float(x @ x) - improve_tol or j in active:
            majors -= 1
            break
        active.append(j)
        lam = np.append(lam, 0.0)
        while True:
            k = len(active)
            gram = pts[active] @ pts[active].T
            system = np.zeros((k + 1, k + 1))
            system[:k, :k] = gram
            system[:k, k] = 1.0
            system[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            sol, *_ = np.linalg.lstsq(system, rhs, rcond=None)
            alpha = sol[:k]
            if np.all(alpha > 1e-12):
                x = pts[active].T @ alpha
                lam = alpha
                break
            # line search from lam toward alpha, staying in the simplex
            neg = alpha <= 1e-12
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = lam[neg] / (lam[neg] - alpha[neg])
            finite = ratios[np.isfinite(ratios)]
            theta = float(np.min(finite)) if finite.size else 0.0
            lam = theta * alpha + (1.0 - theta) * lam
            lam[lam < 1e-12] = 0.0
            x = pts[active].T @ lam
            keep = lam > 0.0
            if not np.any(keep):
                keep[int(np.argmax(alpha))] = True
                lam[keep] = 1.0
            active = [active[i] for i in range(k) if keep[i]]
            lam = lam[keep]
    else:
        raise RuntimeError(f"min-norm point did not converge in {max_major} major cycles")
    coeffs = np.zeros(count)
    for i, idx in enumerate(active):
        coeffs[idx] += lam[i]
    return MinNormPoint(
        point=x,
        coefficients=coeffs,
        certificate_gap=certificate_gap(x, pts),
        major_cycles=majors,
    )


@dataclass(frozen=True)
class StratumLabel:
    """Sorted (ascending) rational spectrum with trace -1; one fixed Weyl chamber."""

    beta: tuple[Fraction, ...]
    norm_sq: Fraction

    def __post_init__(self):
        if sum(self.beta, Fraction(0)) != -1:
            raise ValueError(f"stratum label must have trace -1, got {self.beta}")
        if list(self.beta) != sorted(self.beta):
            raise ValueError("stratum label must be sorted ascending")

    @classmethod
    def from_floats(cls, values, snap_tol: float = LABEL_SNAP_TOL,
                    max_den: int = MAX_DENOMINATOR) -> "StratumLabel":
        fr = [snap_fraction(float(v), max_den=max_den, tol=snap_tol) for v in sorted(values)]
        return cls(beta=tuple(fr), norm_sq=sum((f * f for f in fr), Fraction(0)))

    @property
    def dim(self) -> int:
        return len(self.beta)

    def __str__(self):
        return "(" + ", ".join(format_fraction(b) for b in self.beta) + ")"

    def to_json_dict(self) -> dict:
        return {
            "beta": [format_fraction(b) for b in self.beta],
            "energy": format_fraction(self.norm_sq),
        }


def beta_mu_point(mu: StructureTensor, tol: float = 1e-10) -> MinNormPoint:
    """Raw (float) minimum-norm point over the supported weights."""
    weights = support_weights(mu, tol)
    return min_norm_point([w.diagonal for w in weights])


def beta_mu(mu: StructureTensor, support_tol: float = 1e-10,
            snap_tol: float = 1e-6) -> StratumLabel:
    """beta_mu as a snapped, ascending stratum label."""
    result = beta_mu_point(mu, support_tol)
    label = StratumLabel.from_floats(result.point, snap_tol=snap_tol)
    if abs(float(label.norm_sq) - float(result.point @ result.point)) > 10 * snap_tol:
        raise RationalSnapError(f"snapped label {label} is inconsistent with ||beta||^2")
    return label


def stratum_of(mu: StructureTensor, opts: FlowOptions = FlowOptions(),
               label_tol: float = LABEL_SNAP_TOL) -> StratumLabel:
    """Stratum label of mu: flow to the terminal soliton and snap its moment spectrum.

    The exact flow stays in the orbit of mu, so the label is a basis-change
    invariant.  Numerically the non-minimal strata are measure-zero stable
    manifolds, and the discretized flow from a *generic-position* start can
    fall into a more generic (lower-energy) stratum; labels are reliable for
    near-critical starts, for unitary images of them, and on the open
    minimal stratum.
    """
    trace = run_flow(mu, opts, type_snap_tol=label_tol)
    if not trace.converged:
        raise RuntimeError(
            f"flow did not converge in {opts.max_steps} steps (terminal energy {trace.terminal_energy!r})"
        )
    evals = np.sort(np.linalg.eigvalsh(trace.terminal_report.m))
    spectrum = snap_spectrum(evals, tol=label_tol)
    beta: list[Fraction] = []
    for frac, mult in spectrum:
        beta.extend([frac] * mult)
    return StratumLabel(beta=tuple(beta), norm_sq=sum((b * b for b in beta), Fraction(0)))


def label_from_type(stype) -> StratumLabel:
    """StratumLabel carried by a soliton type (the sorted beta diagonal)."""
    beta = tuple(stype.beta_diagonal())
    return StratumLabel(beta=beta, norm_sq=stype.energy)


def label_from_fractions(values) -> StratumLabel:
    """Label built directly from exact rational entries (re-sorted ascending)."""
    beta = tuple(sorted(Fraction(v) for v in values))
    return StratumLabel(beta=beta, norm_sq=sum((b * b for b in beta), Fraction(0)))
