"""Fourier coefficients on the dual side, noncommutative lp norms, weights.

A coefficient family assigns to finitely many irreducible labels a matrix
block, either ``value * Id`` (the only kind needed for central elements) or
a small dense matrix.  All norms follow the dual trace weighted by n_alpha:

    ||A||_p = (sum_alpha n_alpha tr(|A_alpha|^p))^(1/p).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import groups
from .errors import ExponentRangeError, InterpolationRelationError, LabelMismatchError
from .groups import GroupDescriptor

DENSE_DIM_LIMIT = 64


# ---------------------------------------------------------------------------
# Blocks


@dataclass(frozen=True)
class ScalarBlock:
    """value * Id on a dim-dimensional block."""

    dim: int
    value: complex

    def schatten_power(self, p: float) -> float:
        """tr(|A|^p)."""
        return self.dim * abs(self.value) ** p

    def hs_norm_sq(self) -> float:
        return self.dim * abs(self.value) ** 2

    def op_norm(self) -> float:
        return abs(self.value)

    def scaled(self, factor):
        return ScalarBlock(self.dim, self.value * factor)


@dataclass(frozen=True)
class DenseBlock:
    """Explicit dim x dim block; desk-scale only (dim <= 64)."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("dense block must be square")
        if m.shape[0] > DENSE_DIM_LIMIT:
            raise ValueError(f"dense blocks limited to dim <= {DENSE_DIM_LIMIT}")
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def _singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.entries, compute_uv=False)

    def schatten_power(self, p: float) -> float:
        return float(np.sum(self._singular_values() ** p))

    def hs_norm_sq(self) -> float:
        return float(np.sum(np.abs(self.entries) ** 2))

    def op_norm(self) -> float:
        return float(self._singular_values()[0])

    def scaled(self, factor):
        return DenseBlock(self.entries * factor)


Block = ScalarBlock | DenseBlock


# ---------------------------------------------------------------------------
# Weight families

_WEIGHT_FAMILIES = ("sobolev", "sharp_hy", "hardy_littlewood", "rapid_decay", "power")


def _conjugate(p: float) -> float:
    if p == 1:
        return math.inf
    if p == math.inf:
        return 1.0
    return p / (p - 1)


@dataclass(frozen=True)
class WeightSpec:
    """A named power-law weight family, evaluated as w(k) = (1+k)^exponent."""

    family: str
    exponent: float
    params: tuple = ()

    def __post_init__(self):
        if self.family not in _WEIGHT_FAMILIES:
            raise ValueError(f"unknown weight family {self.family!r}")

    def __call__(self, k: float) -> float:
        return (1.0 + k) ** self.exponent

    @staticmethod
    def sobolev(s: float, p: float) -> "WeightSpec":
        """Block-level Sobolev weight; its square is (1+k)^{-s(2/p-1)}."""
        return WeightSpec("sobolev", -s * (2.0 / p - 1.0) / 2.0, (s, p))

    @staticmethod
    def sharpened_hy(beta: float, p: float) -> "WeightSpec":
        pp = _conjugate(p)
        return WeightSpec("sharp_hy", -beta * (pp - 2.0), (beta, p))

    @staticmethod
    def hardy_littlewood(beta: float, p: float) -> "WeightSpec":
        return WeightSpec("hardy_littlewood", -(beta + 1.0) * (2.0 - p), (beta, p))

    @staticmethod
    def rapid_decay(s: float) -> "WeightSpec":
        return WeightSpec("rapid_decay", -s, (s,))

    @staticmethod
    def power(e: float) -> "WeightSpec":
        return WeightSpec("power", e, (e,))


# ---------------------------------------------------------------------------
# Coefficient containers


@dataclass(frozen=True)
class FourierCoefficients:
    """Finite family of coefficient blocks, keyed by irreducible label."""

    group: GroupDescriptor
    blocks: dict = field(default_factory=dict)

    def __post_init__(self):
        checked = {}
        for label, block in self.blocks.items():
            label = groups.check_label(self.group, label)
            n = groups.dimension(self.group, label)
            if block.dim != n:
                raise LabelMismatchError(
                    f"block at {label} has dim {block.dim}, expected {n}"
                )
            checked[label] = block
        object.__setattr__(self, "blocks", checked)

    def labels(self):
        return self.blocks.keys()

    def with_blocks(self, blocks: dict) -> "FourierCoefficients":
        return FourierCoefficients(self.group, blocks)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        items = []
        for label in sorted(self.blocks, key=_label_sort_key):
            block = self.blocks[label]
            if isinstance(block, ScalarBlock):
                val = complex(block.value)
                enc = {
                    "type": "scalar",
                    "dim": block.dim,
                    "re": val.real,
                    "im": val.imag,
                }
            else:
                enc = {
                    "type": "dense",
                    "re": np.real(block.entries).tolist(),
                    "im": np.imag(block.entries).tolist(),
                }
            items.append({"label": _label_to_json(self.group, label), "block": enc})
        return {"group": str(self.group), "coeffs": items}

    @staticmethod
    def from_json_dict(doc: dict) -> "FourierCoefficients":
        group = groups.parse_group(doc["group"])
        blocks = {}
        for item in doc["coeffs"]:
            label = _label_from_json(group, item["label"])
            enc = item["block"]
            if enc["type"] == "scalar":
                blocks[label] = ScalarBlock(
                    dim=int(enc.get("dim", groups.dimension(group, label))),
                    value=complex(enc.get("re", 0.0), enc.get("im", 0.0)),
                )
            elif enc["type"] == "dense":
                re = np.asarray(enc["re"], dtype=float)
                im = np.asarray(enc.get("im", np.zeros_like(re)), dtype=float)
                blocks[label] = DenseBlock(re + 1j * im)
            else:
                raise ValueError(f"unknown block type {enc['type']!r}")
        return FourierCoefficients(group, blocks)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)


def _label_sort_key(label):
    if isinstance(label, tuple):
        return (len(label), label)
    return (0, (label,))


def _label_to_json(group: GroupDescriptor, label):
    if group.kind == "fdual":
        return groups.word_to_str(label)
    if group.kind == "zd":
        return list(label)
    return int(label)


def _label_from_json(group: GroupDescriptor, enc):
    if group.kind == "fdual":
        if isinstance(enc, str):
            return groups.word_from_str(enc)
        return tuple(enc)
    if group.kind == "zd":
        return tuple(enc)
    return int(enc)


@dataclass(frozen=True)
class CentralElement:
    """sum_k a_k chi_k in the character basis of a degree-labeled group.

    Coefficients may be ints, Fractions, floats, or complex; exact types are
    preserved so fusion products stay exact.
    """

    group: GroupDescriptor
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.group.has_degree_labels:
            raise LabelMismatchError(
                f"central (character-basis) elements need degree labels, not {self.group}"
            )
        checked = {}
        for k, a in self.coeffs.items():
            k = groups.check_label(self.group, k)
            if a != 0:
                checked[k] = a
        object.__setattr__(self, "coeffs", checked)

    def degree(self) -> int:
        return max(self.coeffs, default=0)

    def to_fourier(self) -> FourierCoefficients:
        """Blocks (a_k / n_k) * Id; the lossless matrix form of the element."""
        blocks = {}
        for k, a in self.coeffs.items():
            n = groups.dimension(self.group, k)
            blocks[k] = ScalarBlock(n, complex(a) / n)
        return FourierCoefficients(self.group, blocks)

    @staticmethod
    def from_fourier(coeffs: FourierCoefficients) -> "CentralElement":
        """Inverse of to_fourier; requires every block to be scalar."""
        data = {}
        for label, block in coeffs.blocks.items():
            if not isinstance(block, ScalarBlock):
                raise ValueError("non-scalar block: element is not central")
            data[label] = block.value * block.dim
        return CentralElement(coeffs.group, data)

    def plancherel_norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.coeffs.values()))

    def weighted(self, weight) -> "CentralElement":
        w = _weight_of_length(weight)
        return CentralElement(
            self.group, {k: a * w(k, k) for k, a in self.coeffs.items()}
        )

    def __mul__(self, other: "CentralElement") -> "CentralElement":
        if self.group != other.group:
            raise LabelMismatchError("central product requires matching groups")
        return CentralElement(
            self.group, groups.central_product(self.group, self.coeffs, other.coeffs)
        )

    def __add__(self, other: "CentralElement") -> "CentralElement":
        if self.group != other.group:
            raise LabelMismatchError("sum requires matching groups")
        out = dict(self.coeffs)
        for k, a in other.coeffs.items():
            out[k] = out.get(k, 0) + a
        return CentralElement(self.group, out)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "group": str(self.group),
            "coeffs": [
                {"k": k, "re": float(complex(a).real), "im": float(complex(a).imag)}
                for k, a in sorted(self.coeffs.items())
            ],
        }

    @staticmethod
    def from_json_dict(doc: dict) -> "CentralElement":
        group = groups.parse_group(doc["group"])
        data = {}
        for item in doc["coeffs"]:
            val = complex(item.get("re", 0.0), item.get("im", 0.0))
            data[int(item["k"])] = val.real if val.imag == 0 else val
        return CentralElement(group, data)


def _weight_of_length(weight):
    """Normalize a weight argument to a callable (label, length) -> real.

    WeightSpec instances evaluate on the length; bare callables receive the
    label (labels and lengths coincide on degree-labeled groups).
    """
    if isinstance(weight, WeightSpec):
        return lambda label, klen: weight(klen)
    if callable(weight):
        return lambda label, klen: weight(label)
    raise TypeError("weight must be a WeightSpec or a callable")


# ---------------------------------------------------------------------------
# Norms


def _as_fourier(coeffs) -> FourierCoefficients:
    if isinstance(coeffs, CentralElement):
        return coeffs.to_fourier()
    return coeffs


def dual_lp_norm(coeffs, p: float) -> float:
    """(sum_alpha n_alpha tr(|A_alpha|^p))^(1/p); p = inf gives max op norm."""
    if p < 1:
        raise ExponentRangeError(f"p must be >= 1, got {p}")
    fc = _as_fourier(coeffs)
    if not fc.blocks:
        return 0.0
    if p == math.inf:
        return max(block.op_norm() for block in fc.blocks.values())
    total = 0.0
    for label, block in fc.blocks.items():
        n = groups.dimension(fc.group, label)
        total += n * block.schatten_power(p)
    return total ** (1.0 / p)


def plancherel_l2_norm(coeffs) -> float:
    """L2 norm via Plancherel; equals dual_lp_norm(., 2)."""
    if isinstance(coeffs, CentralElement):
        return coeffs.plancherel_norm()
    return dual_lp_norm(coeffs, 2)


def apply_multiplier(coeffs, weight) -> FourierCoefficients:
    """Scale the block at alpha by w(|alpha|) (WeightSpec) or w(alpha) (callable)."""
    fc = _as_fourier(coeffs)
    w = _weight_of_length(weight)
    out = {}
    for label, block in fc.blocks.items():
        out[label] = block.scaled(w(label, groups.length(fc.group, label)))
    return fc.with_blocks(out)


def project_sphere(coeffs, k: int) -> FourierCoefficients:
    """Restrict the support to labels of length exactly k."""
    fc = _as_fourier(coeffs)
    kept = {
        label: block
        for label, block in fc.blocks.items()
        if groups.length(fc.group, label) == k
    }
    return fc.with_blocks(kept)


def _sphere_hs_sums(fc: FourierCoefficients) -> dict:
    """k -> sum over |alpha| = k of n_alpha ||A_alpha||_{S^2}^2."""
    sums: dict = {}
    for label, block in fc.blocks.items():
        k = groups.length(fc.group, label)
        n = groups.dimension(fc.group, label)
        sums[k] = sums.get(k, 0.0) + n * block.hs_norm_sq()
    return sums


def mixed_norm(coeffs, q: float, weight) -> float:
    """Two-level sphere norm (sum_k w(k) (sum_{|a|=k} n_a ||A_a||_{S2}^2)^{q/2})^{1/q}.

    For q = inf the weight is folded into the sup:
    sup_k w(k) (inner_k)^{1/2}.
    """
    if q < 1:
        raise ExponentRangeError(f"q must be >= 1, got {q}")
    fc = _as_fourier(coeffs)
    sums = _sphere_hs_sums(fc)
    if not sums:
        return 0.0
    w = _weight_of_length(weight)
    if q == math.inf:
        return max(w(k, k) * math.sqrt(inner) for k, inner in sums.items())
    total = sum(w(k, k) * inner ** (q / 2.0) for k, inner in sums.items())
    return total ** (1.0 / q)


def schatten_weighted_norm(coeffs, p_prime: float, beta: float) -> float:
    """(sum_a n_a^{p'/2-1} (1+|a|)^{-beta(p'-2)} n_a ||A_a||_{S^{p'}}^{p'})^{1/p'}."""
    if p_prime < 2:
        raise ExponentRangeError(f"p' must be >= 2, got {p_prime}")
    fc = _as_fourier(coeffs)
    if not fc.blocks:
        return 0.0
    total = 0.0
    for label, block in fc.blocks.items():
        n = groups.dimension(fc.group, label)
        k = groups.length(fc.group, label)
        total += (
            n ** (p_prime / 2.0 - 1.0)
            * (1.0 + k) ** (-beta * (p_prime - 2.0))
            * n
            * block.schatten_power(p_prime)
        )
    return total ** (1.0 / p_prime)


def dual_pairing(a, b) -> complex:
    """<A, B> = sum_alpha n_alpha tr(B_alpha A_alpha)."""
    fa, fb = _as_fourier(a), _as_fourier(b)
    if fa.group != fb.group:
        raise LabelMismatchError("pairing requires matching groups")
    total = 0.0 + 0.0j
    for label in fa.blocks.keys() & fb.blocks.keys():
        n = groups.dimension(fa.group, label)
        A, B = fa.blocks[label], fb.blocks[label]
        if isinstance(A, ScalarBlock) and isinstance(B, ScalarBlock):
            total += n * A.dim * (B.value * A.value)
        else:
            ma = A.entries if isinstance(A, DenseBlock) else A.value * np.eye(A.dim)
            mb = B.entries if isinstance(B, DenseBlock) else B.value * np.eye(B.dim)
            total += n * np.trace(mb @ ma)
    return complex(total)


# ---------------------------------------------------------------------------
# Interpolation exponent calculus


def interp_weight_combine(
    mu0_exp: float,
    p0: float,
    mu1_exp: float,
    p1: float,
    theta: float,
    p_target: float,
) -> float:
    """Exponent of the interpolated weight mu = mu0^{p(1-theta)/p0} mu1^{p theta/p1}.

    The inputs describe mu_i(k) = (1+k)^{mu_i_exp}; the return value e gives
    mu(k) = (1+k)^e.  Requires (1-theta)/p0 + theta/p1 = 1/p_target.
    """
    if not 0.0 < theta < 1.0:
        raise InterpolationRelationError(f"theta must be in (0,1), got {theta}")
    lhs = (1.0 - theta) / p0 + theta / p1
    if abs(lhs - 1.0 / p_target) > 1e-12:
        raise InterpolationRelationError(
            f"(1-theta)/p0 + theta/p1 = {lhs} but 1/p_target = {1.0 / p_target}"
        )
    c0 = p_target * (1.0 - theta) / p0 if p0 != math.inf else 0.0
    c1 = p_target * theta / p1 if p1 != math.inf else 0.0
    return mu0_exp * c0 + mu1_exp * c1


def conjugate_exponent(p: float) -> float:
    """Hoelder conjugate p' with 1/p + 1/p' = 1."""
    return _conjugate(p)
