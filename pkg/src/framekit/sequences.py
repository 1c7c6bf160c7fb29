"""Sequences in a Hilbert space: explicit finite lists and closed-form infinite families.

Basis and element indices are 1-based throughout (``e_1, e_2, ...`` and
``psi_1, psi_2, ...``); arrays are 0-based internally.

Structured families are deliberately restricted to index maps and weight laws
whose series behaviour can be decided exactly. There is no callback escape
hatch: every family exposes its preimage structure so the analytic backend in
:mod:`framekit.frameops` never has to guess about convergence.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from .errors import InputError, ResourceError, ValidationError

DEFAULT_MAX_DIM = 4096


def max_dim_from_env():
    raw = os.environ.get("FRAMEKIT_MAX_DIM")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise ValidationError("invalid parameter", f"FRAMEKIT_MAX_DIM={raw!r} is not an integer")
    if value < 1:
        raise ValidationError("invalid parameter", "FRAMEKIT_MAX_DIM must be >= 1")
    return value


def as_hvector(v, dim=None):
    x = np.array(v, dtype=np.complex128, copy=True)
    if x.ndim != 1:
        raise InputError("a Hilbert-space vector must be one-dimensional")
    if x.size < 1:
        raise InputError("a Hilbert-space vector needs dim >= 1")
    if not np.all(np.isfinite(x)):
        raise InputError("vector has non-finite entries")
    if dim is not None and x.size != dim:
        raise InputError(f"vector has dim {x.size}, expected {dim}")
    return x


# ---------------------------------------------------------------------------
# Finite sequences


@dataclass(frozen=True, eq=False)
class FiniteSequence:
    """``m`` vectors in ``C^n`` stored as the columns of an ``n x m`` matrix.

    Zero vectors are legal elements.
    """

    matrix: np.ndarray

    def __post_init__(self):
        a = np.array(self.matrix, dtype=np.complex128, copy=True)
        if a.ndim != 2:
            raise ValidationError("dimension mismatch", "element matrix must be 2-D")
        if a.shape[1] < 1:
            raise ValidationError("empty sequence")
        if a.shape[0] < 1:
            raise ValidationError("dimension mismatch", "space_dim must be >= 1")
        if not np.all(np.isfinite(a)):
            raise ValidationError("non-finite entry")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @classmethod
    def from_vectors(cls, vectors, space_dim=None):
        vectors = list(vectors)
        if not vectors:
            raise ValidationError("empty sequence")
        arrs = [np.atleast_1d(np.asarray(v, dtype=np.complex128)) for v in vectors]
        n = space_dim if space_dim is not None else arrs[0].size
        for j, v in enumerate(arrs, start=1):
            if v.ndim != 1 or v.size != n:
                raise ValidationError(
                    "dimension mismatch", f"element {j} has dim {v.size}, expected {n}"
                )
        return cls(np.stack(arrs, axis=1))

    @property
    def space_dim(self):
        return self.matrix.shape[0]

    def __len__(self):
        return self.matrix.shape[1]

    @property
    def elements(self):
        return [self.matrix[:, j].copy() for j in range(len(self))]

    def element(self, i):
        """The ``i``-th element, 1-based."""
        return self.matrix[:, i - 1].copy()

    def without(self, j):
        """The sequence with the ``j``-th element (1-based) removed."""
        if len(self) == 1:
            raise ValidationError("empty sequence", "cannot remove the only element")
        return FiniteSequence(np.delete(self.matrix, j - 1, axis=1))

    def embed(self, dim):
        """Zero-pad every element into ``C^dim`` (``dim >= space_dim``)."""
        if dim < self.space_dim:
            raise InputError(f"cannot embed C^{self.space_dim} into C^{dim}")
        out = np.zeros((dim, len(self)), dtype=np.complex128)
        out[: self.space_dim] = self.matrix
        return FiniteSequence(out)

    def scaled(self, t):
        return FiniteSequence(self.matrix * t)


def project_onto(seq, support):
    """Zero every coordinate outside ``support`` (a set of 1-based basis indices)."""
    n = seq.space_dim
    idx = sorted(set(int(k) for k in support))
    for k in idx:
        if k < 1 or k > n:
            raise InputError(f"support index {k} out of range 1..{n}")
    mask = np.zeros(n, dtype=bool)
    mask[[k - 1 for k in idx]] = True
    out = np.where(mask[:, None], seq.matrix, 0)
    return FiniteSequence(out)


# ---------------------------------------------------------------------------
# Preimages of index maps


@dataclass(frozen=True)
class Preimage:
    """All positions ``i`` with ``sigma(i) = k``.

    ``finite`` lists isolated positions, each ``(start, step)`` in
    ``progressions`` stands for ``start, start + step, ...`` and each
    ``(offset, j)`` in ``triangular`` stands for ``offset + b(b-1)/2 + j``
    over ``b >= j``.
    """

    finite: Tuple[int, ...] = ()
    progressions: Tuple[Tuple[int, int], ...] = ()
    triangular: Tuple[Tuple[int, int], ...] = ()

    @property
    def is_finite(self):
        return not self.progressions and not self.triangular

    @property
    def is_empty(self):
        return self.is_finite and not self.finite

    def shifted(self, offset):
        return Preimage(
            tuple(i + offset for i in self.finite),
            tuple((s + offset, p) for s, p in self.progressions),
            tuple((o + offset, j) for o, j in self.triangular),
        )

    def union(self, other):
        return Preimage(
            tuple(sorted(self.finite + other.finite)),
            self.progressions + other.progressions,
            self.triangular + other.triangular,
        )


def _tri(b):
    return b * (b - 1) // 2


# Eventual laws: for k >= k0 the preimage of k follows one of these shapes.
@dataclass(frozen=True)
class SingleLaw:
    """``sigma^{-1}(k) = {alpha * k + beta}`` for every ``k >= k0``."""

    k0: int
    alpha: int
    beta: int


@dataclass(frozen=True)
class EmptyLaw:
    """No position maps to ``k`` for ``k >= k0``."""

    k0: int


@dataclass(frozen=True)
class TriangularLaw:
    """``sigma^{-1}(k) = {offset + b(b-1)/2 + (k - shift) : b >= k - shift}`` for ``k >= k0``."""

    k0: int
    offset: int
    shift: int


class IndexMap:
    kind = "abstract"

    def __call__(self, i):
        raise NotImplementedError

    def preimage(self, k):
        raise NotImplementedError

    def eventual_law(self):
        raise NotImplementedError

    def infinite_preimage(self):
        """``(kind, set)``: ``("finite", S)`` or ``("all", {})`` for the ks hit infinitely often."""
        raise NotImplementedError

    def is_injective(self):
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError


@dataclass(frozen=True)
class IdentityMap(IndexMap):
    kind = "identity"

    def __call__(self, i):
        return i

    def preimage(self, k):
        return Preimage(finite=(k,))

    def eventual_law(self):
        return SingleLaw(1, 1, 0)

    def infinite_preimage(self):
        return ("finite", frozenset())

    def is_injective(self):
        return True

    def to_dict(self):
        return {"map": "identity"}


@dataclass(frozen=True)
class InterleaveMap(IndexMap):
    """``e_a`` at every odd position, the remaining basis vectors in order at even ones.

    With ``anchor = 1`` this is ``(e1, e2, e1, e3, e1, e4, ...)``.
    """

    anchor: int = 1
    kind = "interleave"

    def __call__(self, i):
        if i % 2 == 1:
            return self.anchor
        j = i // 2
        return j if j < self.anchor else j + 1

    def preimage(self, k):
        if k == self.anchor:
            return Preimage(progressions=((1, 2),))
        j = k if k < self.anchor else k - 1
        return Preimage(finite=(2 * j,))

    def eventual_law(self):
        return SingleLaw(self.anchor + 1, 2, -2)

    def infinite_preimage(self):
        return ("finite", frozenset({self.anchor}))

    def is_injective(self):
        return False

    def to_dict(self):
        return {"map": "interleave", "anchor": self.anchor}


@dataclass(frozen=True)
class TriangularMap(IndexMap):
    """Blocks ``(e1), (e1, e2), (e1, e2, e3), ...``; every basis vector recurs forever."""

    kind = "triangular"

    def __call__(self, i):
        # smallest b with b(b+1)/2 >= i
        b = (math.isqrt(8 * i + 1) - 1) // 2
        if b * (b + 1) // 2 < i:
            b += 1
        return i - _tri(b)

    def preimage(self, k):
        return Preimage(triangular=((0, k),))

    def eventual_law(self):
        return TriangularLaw(1, 0, 0)

    def infinite_preimage(self):
        return ("all", frozenset())

    def is_injective(self):
        return False

    def to_dict(self):
        return {"map": "triangular"}


@dataclass(frozen=True)
class PeriodicMap(IndexMap):
    """``sigma(i) = pattern[(i - 1) mod p]``."""

    pattern: Tuple[int, ...]
    kind = "periodic"

    def __call__(self, i):
        return self.pattern[(i - 1) % len(self.pattern)]

    def preimage(self, k):
        p = len(self.pattern)
        return Preimage(
            progressions=tuple((r + 1, p) for r, v in enumerate(self.pattern) if v == k)
        )

    def eventual_law(self):
        return EmptyLaw(max(self.pattern) + 1)

    def infinite_preimage(self):
        return ("finite", frozenset(self.pattern))

    def is_injective(self):
        return False

    def to_dict(self):
        return {"map": "periodic", "pattern": list(self.pattern)}


@dataclass(frozen=True)
class PrefixMap(IndexMap):
    """Explicit values for the first positions, then ``tail(i - L) + shift``."""

    prefix: Tuple[int, ...]
    tail: IndexMap
    shift: int = 0
    kind = "prefix"

    def __call__(self, i):
        L = len(self.prefix)
        if i <= L:
            return self.prefix[i - 1]
        return self.tail(i - L) + self.shift

    def preimage(self, k):
        L = len(self.prefix)
        head = Preimage(finite=tuple(i for i, v in enumerate(self.prefix, start=1) if v == k))
        if k - self.shift >= 1:
            return head.union(self.tail.preimage(k - self.shift).shifted(L))
        return head

    def eventual_law(self):
        L = len(self.prefix)
        inner = self.tail.eventual_law()
        k0 = max(inner.k0 + self.shift, max(self.prefix, default=0) + 1, self.shift + 1)
        if isinstance(inner, SingleLaw):
            return SingleLaw(k0, inner.alpha, inner.beta + L - inner.alpha * self.shift)
        if isinstance(inner, EmptyLaw):
            return EmptyLaw(k0)
        return TriangularLaw(k0, inner.offset + L, inner.shift + self.shift)

    def infinite_preimage(self):
        kind, ks = self.tail.infinite_preimage()
        if kind == "all":
            # every k > shift is hit infinitely; k <= shift only through the prefix
            return ("cofinite", frozenset(range(1, self.shift + 1)))
        return ("finite", frozenset(k + self.shift for k in ks))

    def is_injective(self):
        if len(set(self.prefix)) != len(self.prefix):
            return False
        if not self.tail.is_injective():
            return False
        # a prefix value must not also be reached by the shifted tail
        return all(v - self.shift < 1 or self.tail.preimage(v - self.shift).is_empty for v in self.prefix)

    def to_dict(self):
        return {
            "map": "prefix",
            "prefix": list(self.prefix),
            "tail": self.tail.to_dict(),
            "shift": self.shift,
        }


# ---------------------------------------------------------------------------
# Weight laws

Number = Union[int, float, complex]


class WeightForm:
    kind = "abstract"

    def __call__(self, i):
        raise NotImplementedError

    def base(self):
        """The closed-form law governing positions past any explicit prefix."""
        return self

    def prefix_len(self):
        return 0

    def to_dict(self):
        raise NotImplementedError


def _num_to_json(z):
    z = complex(z)
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


@dataclass(frozen=True)
class ConstWeight(WeightForm):
    c: complex = 1.0
    kind = "const"

    def __call__(self, i):
        return complex(self.c)

    def to_dict(self):
        return {"form": "const", "c": _num_to_json(self.c)}


@dataclass(frozen=True)
class PolyWeight(WeightForm):
    """``w_i = a * i**p + b``."""

    a: complex = 1.0
    p: float = 1.0
    b: complex = 0.0
    kind = "poly"

    def __call__(self, i):
        return complex(self.a) * float(i) ** self.p + complex(self.b)

    def to_dict(self):
        return {"form": "poly", "a": _num_to_json(self.a), "p": self.p, "b": _num_to_json(self.b)}


@dataclass(frozen=True)
class ExpWeight(WeightForm):
    """``w_i = a * r**i``."""

    a: complex = 1.0
    r: complex = 0.5
    kind = "exp"

    def __call__(self, i):
        return complex(self.a) * complex(self.r) ** i

    def to_dict(self):
        return {"form": "exp", "a": _num_to_json(self.a), "r": _num_to_json(self.r)}


@dataclass(frozen=True)
class PrefixWeight(WeightForm):
    """Explicit ``w_1..w_L``, then ``tail(i)`` evaluated at the absolute position ``i``."""

    values: Tuple[complex, ...]
    tail: WeightForm
    kind = "prefix"

    def __call__(self, i):
        if i <= len(self.values):
            return complex(self.values[i - 1])
        return self.tail(i)

    def base(self):
        return self.tail.base()

    def prefix_len(self):
        return max(len(self.values), self.tail.prefix_len())

    def to_dict(self):
        return {
            "form": "prefix",
            "values": [_num_to_json(v) for v in self.values],
            "tail": self.tail.to_dict(),
        }


# ---------------------------------------------------------------------------
# Structured sequences


class StructuredSequence:
    kind = "abstract"

    def element(self, i, dim):
        raise NotImplementedError

    def support_dim(self, N):
        """Largest basis index touched by the first ``N`` elements."""
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError


@dataclass(frozen=True)
class WeightedONB(StructuredSequence):
    """``psi_i = w_i * e_{sigma(i)}``."""

    sigma: IndexMap = field(default_factory=IdentityMap)
    weights: WeightForm = field(default_factory=ConstWeight)
    kind = "weighted_onb"

    def element(self, i, dim):
        v = np.zeros(dim, dtype=np.complex128)
        v[self.sigma(i) - 1] = self.weights(i)
        return v

    def support_dim(self, N):
        return max(self.sigma(i) for i in range(1, N + 1))

    def to_dict(self):
        return {"kind": "weighted_onb", "sigma": self.sigma.to_dict(), "weights": self.weights.to_dict()}


@dataclass(frozen=True)
class AnchoredONB(StructuredSequence):
    """``psi_i = e_i + e_anchor`` (so ``psi_anchor = 2 e_anchor``)."""

    anchor: int = 1
    kind = "anchored_onb"

    def element(self, i, dim):
        v = np.zeros(dim, dtype=np.complex128)
        v[i - 1] += 1
        v[self.anchor - 1] += 1
        return v

    def support_dim(self, N):
        return max(N, self.anchor)

    def to_dict(self):
        return {"kind": "anchored_onb", "anchor": self.anchor}


@dataclass(frozen=True)
class TruncationPlan:
    sizes: Tuple[int, ...]
    space_dim: Optional[int] = None

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sizes)
        if not sizes:
            raise ValidationError("invalid parameter", "truncation plan needs at least one size")
        if any(n < 1 for n in sizes):
            raise ValidationError("invalid parameter", "truncation sizes must be >= 1")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValidationError("invalid parameter", "truncation sizes must be strictly increasing")
        object.__setattr__(self, "sizes", sizes)


def truncate(s, N, space_dim=None, max_dim=None):
    """Materialize ``psi_1..psi_N`` of a structured family as a :class:`FiniteSequence`."""
    if N < 1:
        raise InputError("truncation size must be >= 1")
    if max_dim is None:
        max_dim = max_dim_from_env()
    d = s.support_dim(N)
    if space_dim is not None:
        if space_dim < d:
            raise InputError(f"space_dim {space_dim} smaller than basis index {d} reached at N={N}")
        d = space_dim
    if d > max_dim:
        raise ResourceError(f"truncation at N={N} needs ambient dimension {d} > max {max_dim}")
    cols = [s.element(i, d) for i in range(1, N + 1)]
    return FiniteSequence(np.stack(cols, axis=1))


# ---------------------------------------------------------------------------
# Validation and spec files


def _check_finite_number(z, field_name):
    if not math.isfinite(complex(z).real) or not math.isfinite(complex(z).imag):
        raise ValidationError("non-finite entry", field=field_name)


def _validate_map(m, path="sigma"):
    if isinstance(m, IdentityMap) or isinstance(m, TriangularMap):
        return m
    if isinstance(m, InterleaveMap):
        if not isinstance(m.anchor, int) or m.anchor < 1:
            raise ValidationError("invalid parameter", "anchor must be an integer >= 1", field=f"{path}.anchor")
        return m
    if isinstance(m, PeriodicMap):
        if not m.pattern:
            raise ValidationError("invalid parameter", "pattern must be non-empty", field=f"{path}.pattern")
        if any((not isinstance(k, int)) or k < 1 for k in m.pattern):
            raise ValidationError("invalid parameter", "pattern entries must be integers >= 1", field=f"{path}.pattern")
        return m
    if isinstance(m, PrefixMap):
        if any((not isinstance(k, int)) or k < 1 for k in m.prefix):
            raise ValidationError("invalid parameter", "prefix entries must be integers >= 1", field=f"{path}.prefix")
        if not isinstance(m.shift, int) or m.shift < 0:
            raise ValidationError("invalid parameter", "shift must be an integer >= 0", field=f"{path}.shift")
        if isinstance(m.tail, PrefixMap):
            raise ValidationError("unsupported family", "nested prefix maps are not supported", field=f"{path}.tail")
        _validate_map(m.tail, f"{path}.tail")
        return m
    raise ValidationError("unsupported family", f"unknown index map {type(m).__name__}", field=path)


def _validate_weights(w, path="weights"):
    if isinstance(w, ConstWeight):
        _check_finite_number(w.c, f"{path}.c")
    elif isinstance(w, PolyWeight):
        _check_finite_number(w.a, f"{path}.a")
        _check_finite_number(w.b, f"{path}.b")
        if isinstance(w.p, complex) or not math.isfinite(float(w.p)):
            raise ValidationError("invalid parameter", "p must be a finite real", field=f"{path}.p")
    elif isinstance(w, ExpWeight):
        _check_finite_number(w.a, f"{path}.a")
        _check_finite_number(w.r, f"{path}.r")
    elif isinstance(w, PrefixWeight):
        for j, v in enumerate(w.values):
            _check_finite_number(v, f"{path}.values[{j}]")
        if isinstance(w.tail, PrefixWeight):
            raise ValidationError("unsupported family", "nested prefix weights are not supported", field=f"{path}.tail")
        _validate_weights(w.tail, f"{path}.tail")
    else:
        raise ValidationError("unsupported family", f"unknown weight form {type(w).__name__}", field=path)
    return w


def validate(spec):
    """Check a sequence (object or spec-file dict) and return its normalized form."""
    if isinstance(spec, dict):
        return parse_spec(spec)
    if isinstance(spec, FiniteSequence):
        return spec
    if isinstance(spec, WeightedONB):
        _validate_map(spec.sigma)
        _validate_weights(spec.weights)
        return spec
    if isinstance(spec, AnchoredONB):
        if not isinstance(spec.anchor, int) or spec.anchor < 1:
            raise ValidationError("invalid parameter", "anchor must be an integer >= 1", field="anchor")
        return spec
    if isinstance(spec, (list, tuple)):
        return FiniteSequence.from_vectors(spec)
    raise ValidationError("unsupported family", f"cannot interpret {type(spec).__name__} as a sequence")


def _parse_number(x, path):
    if isinstance(x, bool):
        raise ValidationError("invalid parameter", "expected a number", field=path)
    if isinstance(x, (int, float)):
        z = complex(x)
    elif isinstance(x, (list, tuple)) and len(x) == 2 and all(
        isinstance(t, (int, float)) and not isinstance(t, bool) for t in x
    ):
        z = complex(x[0], x[1])
    else:
        raise ValidationError("invalid parameter", "expected a number or a [re, im] pair", field=path)
    _check_finite_number(z, path)
    return z


def _parse_int(x, path, minimum=1):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ValidationError("invalid parameter", "expected an integer", field=path)
    if x < minimum:
        raise ValidationError("invalid parameter", f"must be >= {minimum}", field=path)
    return x


def _require(d, key, path):
    if not isinstance(d, dict):
        raise ValidationError("invalid parameter", "expected an object", field=path)
    if key not in d:
        raise ValidationError("missing field", field=f"{path}.{key}" if path else key)
    return d[key]


def _parse_map(d, path="sigma"):
    kind = _require(d, "map", path)
    if kind == "identity":
        return IdentityMap()
    if kind == "interleave":
        return InterleaveMap(_parse_int(d.get("anchor", 1), f"{path}.anchor"))
    if kind == "triangular":
        return TriangularMap()
    if kind == "periodic":
        pat = _require(d, "pattern", path)
        if not isinstance(pat, list) or not pat:
            raise ValidationError("invalid parameter", "pattern must be a non-empty list", field=f"{path}.pattern")
        return PeriodicMap(tuple(_parse_int(k, f"{path}.pattern[{j}]") for j, k in enumerate(pat)))
    if kind == "prefix":
        pre = _require(d, "prefix", path)
        if not isinstance(pre, list):
            raise ValidationError("invalid parameter", "prefix must be a list", field=f"{path}.prefix")
        tail = _parse_map(_require(d, "tail", path), f"{path}.tail")
        m = PrefixMap(
            tuple(_parse_int(k, f"{path}.prefix[{j}]") for j, k in enumerate(pre)),
            tail,
            _parse_int(d.get("shift", 0), f"{path}.shift", minimum=0),
        )
        return _validate_map(m, path)
    raise ValidationError("unsupported family", f"unknown index map {kind!r}", field=f"{path}.map")


def _parse_weights(d, path="weights"):
    form = _require(d, "form", path)
    if form == "const":
        return ConstWeight(_parse_number(d.get("c", 1), f"{path}.c"))
    if form == "poly":
        p = d.get("p", 1)
        if isinstance(p, bool) or not isinstance(p, (int, float)) or not math.isfinite(p):
            raise ValidationError("invalid parameter", "p must be a finite real", field=f"{path}.p")
        return PolyWeight(
            _parse_number(d.get("a", 1), f"{path}.a"), float(p), _parse_number(d.get("b", 0), f"{path}.b")
        )
    if form == "exp":
        return ExpWeight(_parse_number(d.get("a", 1), f"{path}.a"), _parse_number(_require(d, "r", path), f"{path}.r"))
    if form == "prefix":
        vals = _require(d, "values", path)
        if not isinstance(vals, list):
            raise ValidationError("invalid parameter", "values must be a list", field=f"{path}.values")
        tail = _parse_weights(_require(d, "tail", path), f"{path}.tail")
        w = PrefixWeight(tuple(_parse_number(v, f"{path}.values[{j}]") for j, v in enumerate(vals)), tail)
        return _validate_weights(w, path)
    raise ValidationError("unsupported family", f"unknown weight form {form!r}", field=f"{path}.form")


def _parse_explicit(d):
    n = _parse_int(_require(d, "space_dim", ""), "space_dim")
    elems = _require(d, "elements", "")
    if not isinstance(elems, list):
        raise ValidationError("invalid parameter", "elements must be a list", field="elements")
    if not elems:
        raise ValidationError("empty sequence", field="elements")
    cols = []
    for j, e in enumerate(elems):
        path = f"elements[{j}]"
        if not isinstance(e, list):
            raise ValidationError("invalid parameter", "an element must be a list of coordinates", field=path)
        if len(e) != n:
            raise ValidationError("dimension mismatch", f"element {j + 1} has dim {len(e)}, expected {n}", field=path)
        cols.append([_parse_number(x, f"{path}[{k}]") for k, x in enumerate(e)])
    return FiniteSequence(np.array(cols, dtype=np.complex128).T)


def parse_spec(d):
    """Build a sequence from a decoded spec-file object."""
    if not isinstance(d, dict):
        raise ValidationError("invalid parameter", "spec must be a JSON object")
    kind = _require(d, "kind", "")
    if kind == "explicit":
        return _parse_explicit(d)
    if kind == "weighted_onb":
        sigma = _parse_map(_require(d, "sigma", ""))
        weights = _parse_weights(_require(d, "weights", ""))
        return validate(WeightedONB(sigma, weights))
    if kind == "anchored_onb":
        return AnchoredONB(_parse_int(d.get("anchor", 1), "anchor"))
    raise ValidationError("unsupported family", f"unknown kind {kind!r}", field="kind")


def _locate(text, field_path):
    """Best-effort 1-based line of the last key in a dotted field path."""
    if not field_path:
        return None
    key = field_path.split(".")[-1].split("[")[0]
    needle = f'"{key}"'
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return lineno
    return None


def loads_spec(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("parse error", exc.msg, line=exc.lineno) from None
    try:
        return parse_spec(d)
    except ValidationError as exc:
        if exc.line is None and exc.field is not None:
            raise ValidationError(exc.code, exc.detail, field=exc.field, line=_locate(text, exc.field)) from None
        raise


def load_spec(path):
    with open(path, encoding="utf-8") as fh:
        return loads_spec(fh.read())


def spec_to_dict(seq):
    if isinstance(seq, FiniteSequence):
        return {
            "kind": "explicit",
            "space_dim": seq.space_dim,
            "elements": [[_num_to_json(z) for z in col] for col in seq.elements],
        }
    return seq.to_dict()
