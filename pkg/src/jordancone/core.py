"""Finite-dimensional Euclidean Jordan algebras stored as coordinate vectors.

An algebra is a direct sum of simple factors; three factor kinds are
supported:

* ``real``     -- one scalar, ordinary multiplication.
* ``spin(n)``  -- the spin factor R (+) R^n with coordinates ``(s, u_1..u_n)``
                  and product ``(s,u) o (t,v) = (s t + <u,v>, s v + t u)``.
                  Its cone is the Lorentz (second-order) cone.
* ``sym(n)``   -- real symmetric n x n matrices under ``X o Y = (XY+YX)/2``,
                  stored as the unscaled upper triangle in row-major order:
                  the coordinate at slot (i, j) is the matrix entry at both
                  (i, j) and (j, i).  The cone is the PSD cone.

The trace form ``<x, y>`` (scalar product / 2(st+<u,v>) / trace(XY) per
factor) is the inner product used for orthogonality tests throughout.  In
the stored coordinates it is a weighted dot product: off-diagonal sym slots
carry weight 2, spin slots weight 2, everything else weight 1.

All values are immutable after construction and every operation is a pure
function, so the whole module is safe for concurrent use.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass
from functools import cached_property, lru_cache

RCOND_SINGULAR = 1e-12

_KINDS = ("real", "spin", "sym")


@dataclass(frozen=True)
class FactorDescriptor:
    """One simple factor of an algebra: ``real``, ``spin(n)`` or ``sym(n)``."""

    kind: str
    n: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.kind == "spin" and self.n < 2:
            raise ValueError("spin factor requires n >= 2")
        if self.kind == "sym" and self.n < 1:
            raise ValueError("sym factor requires n >= 1")
        if self.kind == "real" and self.n != 0:
            raise ValueError("real factor takes no size parameter")

    @property
    def dim(self) -> int:
        if self.kind == "real":
            return 1
        if self.kind == "spin":
            return self.n + 1
        return self.n * (self.n + 1) // 2

    def __str__(self) -> str:
        return self.kind if self.kind == "real" else f"{self.kind}({self.n})"


def real() -> FactorDescriptor:
    return FactorDescriptor("real")


def spin(n: int) -> FactorDescriptor:
    return FactorDescriptor("spin", n)


def sym(n: int) -> FactorDescriptor:
    return FactorDescriptor("sym", n)


@lru_cache(maxsize=None)
def _triu_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    iu, ju = np.triu_indices(n)
    iu.setflags(write=False)
    ju.setflags(write=False)
    return iu, ju


def sym_to_matrix(block: np.ndarray, n: int) -> np.ndarray:
    """Reconstruct the dense symmetric matrix from upper-triangle coords."""
    iu, ju = _triu_indices(n)
    m = np.zeros((n, n))
    m[iu, ju] = block
    m[ju, iu] = block
    return m


def sym_from_matrix(m: np.ndarray, n: int) -> np.ndarray:
    """Extract upper-triangle coordinates; symmetrizes the input first."""
    iu, ju = _triu_indices(n)
    s = 0.5 * (m + m.T)
    return s[iu, ju]


@dataclass(frozen=True)
class AlgebraDescriptor:
    """An ordered direct sum of simple factors with a fixed coordinate layout."""

    factors: tuple[FactorDescriptor, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("algebra needs at least one factor")

    @cached_property
    def total_dim(self) -> int:
        return sum(f.dim for f in self.factors)

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for f in self.factors:
            out.append(acc)
            acc += f.dim
        return tuple(out)

    @cached_property
    def slices(self) -> tuple[slice, ...]:
        return tuple(
            slice(off, off + f.dim) for off, f in zip(self.offsets, self.factors)
        )

    @cached_property
    def inner_weights(self) -> np.ndarray:
        """Weight vector w with <x,y> = sum_i w_i x_i y_i (trace form)."""
        w = np.ones(self.total_dim)
        for f, sl in zip(self.factors, self.slices):
            if f.kind == "spin":
                w[sl] = 2.0
            elif f.kind == "sym":
                iu, ju = _triu_indices(f.n)
                w[sl] = np.where(iu == ju, 1.0, 2.0)
        w.setflags(write=False)
        return w

    @cached_property
    def unit_coords(self) -> np.ndarray:
        c = np.zeros(self.total_dim)
        for f, off in zip(self.factors, self.offsets):
            if f.kind == "real":
                c[off] = 1.0
            elif f.kind == "spin":
                c[off] = 1.0
            else:
                iu, ju = _triu_indices(f.n)
                c[off:off + f.dim][iu == ju] = 1.0
        c.setflags(write=False)
        return c

    def __str__(self) -> str:
        return " + ".join(str(f) for f in self.factors)


def direct_sum(*factors: FactorDescriptor) -> AlgebraDescriptor:
    return AlgebraDescriptor(tuple(factors))


@dataclass(frozen=True, eq=False)
class Element:
    """A coordinate vector in a fixed algebra."""

    algebra: AlgebraDescriptor
    coords: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.coords, dtype=float, copy=True).reshape(-1)
        if c.shape != (self.algebra.total_dim,):
            raise ValueError(
                f"coords length {c.size} does not match algebra dimension "
                f"{self.algebra.total_dim}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def block(self, factor_index: int) -> np.ndarray:
        return self.coords[self.algebra.slices[factor_index]]

    def __add__(self, other: "Element") -> "Element":
        _check_same_algebra(self, other)
        return Element(self.algebra, self.coords + other.coords)

    def __sub__(self, other: "Element") -> "Element":
        _check_same_algebra(self, other)
        return Element(self.algebra, self.coords - other.coords)

    def __neg__(self) -> "Element":
        return Element(self.algebra, -self.coords)

    def __mul__(self, scalar: float) -> "Element":
        return Element(self.algebra, self.coords * float(scalar))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Element({self.algebra}, {np.array2string(self.coords, precision=6)})"


def unit(algebra: AlgebraDescriptor) -> Element:
    return Element(algebra, algebra.unit_coords)


def zero(algebra: AlgebraDescriptor) -> Element:
    return Element(algebra, np.zeros(algebra.total_dim))


def basis_element(algebra: AlgebraDescriptor, index: int) -> Element:
    c = np.zeros(algebra.total_dim)
    c[index] = 1.0
    return Element(algebra, c)


def _check_same_algebra(x: Element, y: Element) -> None:
    if x.algebra != y.algebra:
        raise ValueError("algebra mismatch")


def jordan_product(x: Element, y: Element) -> Element:
    """The Jordan product x o y, evaluated factor by factor."""
    _check_same_algebra(x, y)
    out = np.empty(x.algebra.total_dim)
    for f, sl in zip(x.algebra.factors, x.algebra.slices):
        a, b = x.coords[sl], y.coords[sl]
        if f.kind == "real":
            out[sl] = a * b
        elif f.kind == "spin":
            s, u = a[0], a[1:]
            t, v = b[0], b[1:]
            out[sl.start] = s * t + u @ v
            out[sl.start + 1:sl.stop] = s * v + t * u
        else:
            m = sym_to_matrix(a, f.n) @ sym_to_matrix(b, f.n)
            out[sl] = sym_from_matrix(m, f.n)  # symmetrizes: (XY + YX)/2
    return Element(x.algebra, out)


def inner_product(x: Element, y: Element) -> float:
    """Trace form: x*y / 2(st+<u,v>) / trace(XY) per factor, summed."""
    _check_same_algebra(x, y)
    return float(np.dot(x.algebra.inner_weights * x.coords, y.coords))


def triple_product(x: Element, y: Element, z: Element) -> Element:
    """{x,y,z} = (x o y) o z + (z o y) o x - (x o z) o y."""
    return (
        jordan_product(jordan_product(x, y), z)
        + jordan_product(jordan_product(z, y), x)
        - jordan_product(jordan_product(x, z), y)
    )


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """A dense linear map between algebra coordinate spaces."""

    domain: AlgebraDescriptor
    codomain: AlgebraDescriptor
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float, copy=True)
        if m.shape != (self.codomain.total_dim, self.domain.total_dim):
            raise ValueError(
                f"matrix shape {m.shape} does not match descriptors "
                f"({self.codomain.total_dim}, {self.domain.total_dim})"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def identity_operator(algebra: AlgebraDescriptor) -> LinearOperator:
    return LinearOperator(algebra, algebra, np.eye(algebra.total_dim))


def op_apply(op: LinearOperator, x: Element) -> Element:
    if x.algebra != op.domain:
        raise ValueError("algebra mismatch")
    return Element(op.codomain, op.matrix @ x.coords)


def op_compose(s: LinearOperator, t: LinearOperator) -> LinearOperator:
    """The composition s o t (t acts first)."""
    if t.codomain != s.domain:
        raise ValueError("algebra mismatch: operators do not compose")
    return LinearOperator(t.domain, s.codomain, s.matrix @ t.matrix)


def op_invert(op: LinearOperator) -> LinearOperator:
    if op.matrix.shape[0] != op.matrix.shape[1]:
        raise ValueError("singular operator: matrix is not square")
    sv = np.linalg.svd(op.matrix, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] / sv[0] < RCOND_SINGULAR:
        raise ValueError("singular operator")
    return LinearOperator(op.codomain, op.domain, np.linalg.inv(op.matrix))


def quadratic_rep(x: Element) -> LinearOperator:
    """The quadratic representation U_x: y -> {x,y,x} as a dense matrix.

    Assembled column by column on the standard coordinate basis.
    """
    d = x.algebra.total_dim
    m = np.empty((d, d))
    for j in range(d):
        m[:, j] = triple_product(x, basis_element(x.algebra, j), x).coords
    return LinearOperator(x.algebra, x.algebra, m)


def mult_operator(x: Element) -> LinearOperator:
    """The multiplication operator L_x: y -> x o y."""
    d = x.algebra.total_dim
    m = np.empty((d, d))
    for j in range(d):
        m[:, j] = jordan_product(x, basis_element(x.algebra, j)).coords
    return LinearOperator(x.algebra, x.algebra, m)


def as_rng(seed: int | np.random.Generator) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_element(algebra: AlgebraDescriptor, seed: int | np.random.Generator) -> Element:
    rng = as_rng(seed)
    return Element(algebra, rng.standard_normal(algebra.total_dim))


def random_positive(algebra: AlgebraDescriptor, seed: int | np.random.Generator) -> Element:
    v = random_element(algebra, seed)
    return jordan_product(v, v)


def random_interior(
    algebra: AlgebraDescriptor,
    seed: int | np.random.Generator,
    floor: float = 0.1,
) -> Element:
    """A random element of the open cone: a square pushed off the boundary."""
    return random_positive(algebra, seed) + floor * unit(algebra)


# ---------------------------------------------------------------------------
# serialization (the CLI file formats)

def algebra_to_dict(algebra: AlgebraDescriptor) -> dict:
    out = []
    for f in algebra.factors:
        entry: dict = {"kind": f.kind}
        if f.kind != "real":
            entry["n"] = f.n
        out.append(entry)
    return {"factors": out}


def algebra_from_dict(doc: dict) -> AlgebraDescriptor:
    if not isinstance(doc, dict) or "factors" not in doc:
        raise ValueError("algebra document must contain a 'factors' list")
    factors = []
    for entry in doc["factors"]:
        kind = entry["kind"]
        factors.append(FactorDescriptor(kind, int(entry.get("n", 0))))
    return AlgebraDescriptor(tuple(factors))


def element_to_list(x: Element) -> list[float]:
    return [float(c) for c in x.coords]


def element_from_list(algebra: AlgebraDescriptor, data: list) -> Element:
    return Element(algebra, np.asarray(data, dtype=float))


def operator_to_dict(op: LinearOperator) -> dict:
    r, c = op.matrix.shape
    return {"rows": r, "cols": c, "data": [float(v) for v in op.matrix.ravel()]}


def operator_from_dict(
    domain: AlgebraDescriptor, codomain: AlgebraDescriptor, doc: dict
) -> LinearOperator:
    r, c = int(doc["rows"]), int(doc["cols"])
    data = np.asarray(doc["data"], dtype=float)
    if data.size != r * c:
        raise ValueError("operator data length does not match rows*cols")
    return LinearOperator(domain, codomain, data.reshape(r, c))
