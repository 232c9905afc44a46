"""Dense multivectors over the Euclidean geometric algebras G_1 .. G_6.

A basis blade is encoded as an integer bitmask: bit ``i`` set means the
basis vector ``e_{i+1}`` participates, so ``e13`` is ``0b101``.  The
grade of a blade is the popcount of its mask, and the geometric product
of two blades is ``a ^ b`` up to a sign determined by how many
transpositions are needed to sort the concatenated index lists (every
basis vector squares to +1, so annihilating repeated indices costs no
extra sign).

An :class:`Algebra` precomputes the full sign table together with
boolean masks selecting the outer and inner ("fat dot") parts of the
product, and a :class:`Multivector` is a flat vector of ``2**n``
coefficients indexed by blade mask.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

MAX_DIM = 6


def blade_product(a: int, b: int) -> tuple[int, int]:
    """Geometric product of two basis blades given as bitmasks.

    Returns ``(sign, mask)`` with ``sign in {+1, -1}`` and
    ``mask = a ^ b``.  The sign counts the transpositions needed to
    move every index of ``b`` past the larger indices of ``a``:
    shifting ``a`` right and popcounting the overlap with ``b`` tallies,
    for each index ``i`` in ``a``, how many indices of ``b`` are
    strictly below it.

    >>> blade_product(0b011, 0b010)   # e12 e2 = e1
    (1, 1)
    >>> blade_product(0b011, 0b011)   # e12 e12 = -1
    (-1, 0)
    """
    if a < 0 or b < 0:
        raise ValueError("blade masks must be non-negative")
    swaps = 0
    t = a >> 1
    while t:
        swaps += (t & b).bit_count()
        t >>= 1
    return (-1 if swaps & 1 else 1), a ^ b


def blade_name(mask: int) -> str:
    """Canonical name of a basis blade: ``"1"`` for the scalar, else
    ``"e"`` followed by ascending indices (``0b101`` -> ``"e13"``)."""
    if mask == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(MAX_DIM) if mask >> i & 1)


@lru_cache(maxsize=None)
def _tables(dim: int):
    """Sign table plus outer/inner masks for G_dim, all read-only."""
    size = 1 << dim
    grades = np.array([m.bit_count() for m in range(size)], dtype=np.int8)
    sign = np.empty((size, size), dtype=np.int8)
    for i in range(size):
        for j in range(size):
            sign[i, j] = blade_product(i, j)[0]
    idx = np.arange(size)
    result = idx[:, None] ^ idx[None, :]
    ga, gb = grades[:, None].astype(int), grades[None, :].astype(int)
    gout = grades[result].astype(int)
    outer = gout == ga + gb
    # Fat-dot inner product: keep the |ga - gb| part, but any factor of
    # grade zero contributes nothing.
    inner = (gout == np.abs(ga - gb)) & (ga > 0) & (gb > 0)
    for arr in (grades, sign, result, outer, inner):
        arr.setflags(write=False)
    return grades, sign, result, outer, inner


class Algebra:
    """The Euclidean geometric algebra on ``dim`` orthonormal vectors.

    All basis vectors square to +1.  Instances are interned per
    dimension, so ``Algebra(3) is Algebra(3)``.
    """

    _cache: dict[int, "Algebra"] = {}

    def __new__(cls, dim: int):
        if not isinstance(dim, int) or not 1 <= dim <= MAX_DIM:
            raise ValueError(f"dimension must be an integer in 1..{MAX_DIM}, got {dim!r}")
        try:
            return cls._cache[dim]
        except KeyError:
            self = super().__new__(cls)
            self.dim = dim
            self.size = 1 << dim
            (self.grades, self.sign_table, self.blade_table,
             self.outer_mask, self.inner_mask) = _tables(dim)
            cls._cache[dim] = self
            return self

    def __repr__(self) -> str:
        return f"Algebra({self.dim})"

    # -- constructors -------------------------------------------------

    def multivector(self, coeffs: Sequence[float] | np.ndarray) -> "Multivector":
        """Multivector from a dense length ``2**dim`` coefficient vector."""
        return Multivector(self, coeffs)

    def zero(self) -> "Multivector":
        return Multivector(self, np.zeros(self.size))

    def scalar(self, value: float) -> "Multivector":
        c = np.zeros(self.size)
        c[0] = value
        return Multivector(self, c)

    def blade(self, mask: int, coeff: float = 1.0) -> "Multivector":
        """The basis blade with the given bitmask, scaled by ``coeff``."""
        if not 0 <= mask < self.size:
            raise ValueError(f"blade mask {mask:#b} outside algebra of dimension {self.dim}")
        c = np.zeros(self.size)
        c[mask] = coeff
        return Multivector(self, c)

    def basis_vector(self, i: int) -> "Multivector":
        """``e_i`` with 1-based index ``i``."""
        if not 1 <= i <= self.dim:
            raise ValueError(f"basis vector index {i} outside 1..{self.dim}")
        return self.blade(1 << (i - 1))

    def vector(self, components: Sequence[float] | np.ndarray) -> "Multivector":
        """Grade-1 multivector from its ``dim`` components."""
        components = np.asarray(components, dtype=float)
        if components.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} components, got shape {components.shape}")
        c = np.zeros(self.size)
        c[[1 << i for i in range(self.dim)]] = components
        return Multivector(self, c)

    def pseudoscalar(self) -> "Multivector":
        """The unit pseudoscalar ``I_n = e1 e2 ... en``."""
        return self.blade(self.size - 1)

    def pseudoscalar_inverse(self) -> "Multivector":
        """``I_n^{-1}``, i.e. the reverse of ``I_n`` (unit blade)."""
        return self.pseudoscalar().reverse()

    def basis_blades(self, grade: int | None = None) -> list[int]:
        """Masks of all basis blades, optionally restricted to one grade."""
        masks = range(self.size)
        if grade is None:
            return list(masks)
        return [m for m in masks if self.grades[m] == grade]


class Multivector:
    """An element of an :class:`Algebra`, stored densely by blade mask.

    Supports ``+ - * / ^ |`` where ``*`` is the geometric product
    (or scaling by a real number), ``^`` the outer product and ``|``
    the fat-dot inner product.  Comparison with ``==`` is exact;
    use :meth:`isclose` for numerical work.
    """

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: Algebra, coeffs: Sequence[float] | np.ndarray):
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.shape != (algebra.size,):
            raise ValueError(
                f"expected {algebra.size} coefficients for G_{algebra.dim}, "
                f"got shape {coeffs.shape}")
        coeffs.setflags(write=False)
        self.algebra = algebra
        self.coeffs = coeffs

    # -- bookkeeping ---------------------------------------------------

    def _check_algebra(self, other: "Multivector") -> Algebra:
        if self.algebra is not other.algebra:
            raise ValueError(
                f"mixed algebras: G_{self.algebra.dim} and G_{other.algebra.dim}")
        return self.algebra

    def grades(self) -> set[int]:
        """Grades carrying at least one nonzero coefficient."""
        return {int(g) for g in self.algebra.grades[self.coeffs != 0.0]}

    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def __getitem__(self, mask: int) -> float:
        """Coefficient of the basis blade with the given bitmask."""
        return float(self.coeffs[mask])

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.linalg.norm(self.coeffs))

    # -- linear structure ----------------------------------------------

    def __add__(self, other: "Multivector") -> "Multivector":
        if not isinstance(other, Multivector):
            return NotImplemented
        alg = self._check_algebra(other)
        return Multivector(alg, self.coeffs + other.coeffs)

    def __sub__(self, other: "Multivector") -> "Multivector":
        if not isinstance(other, Multivector):
            return NotImplemented
        alg = self._check_algebra(other)
        return Multivector(alg, self.coeffs - other.coeffs)

    def __neg__(self) -> "Multivector":
        return Multivector(self.algebra, -self.coeffs)

    def __truediv__(self, s: float) -> "Multivector":
        if not isinstance(s, (int, float)):
            return NotImplemented
        return Multivector(self.algebra, self.coeffs / s)

    # -- products --------------------------------------------------------

    def _product(self, other: "Multivector", mask: np.ndarray | None) -> "Multivector":
        alg = self._check_algebra(other)
        return Multivector(alg, batch_product(alg, self.coeffs, other.coeffs, mask)[0])

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return self._product(other, None)
        if isinstance(other, (int, float)):
            return Multivector(self.algebra, self.coeffs * other)
        return NotImplemented

    def __rmul__(self, s):
        if isinstance(s, (int, float)):
            return Multivector(self.algebra, s * self.coeffs)
        return NotImplemented

    def __xor__(self, other: "Multivector") -> "Multivector":
        """Outer product ``self ^ other``."""
        if not isinstance(other, Multivector):
            return NotImplemented
        return self._product(other, self.algebra.outer_mask)

    def __or__(self, other: "Multivector") -> "Multivector":
        """Fat-dot inner product: grade ``|r - s|`` parts, with any
        scalar factor contributing zero."""
        if not isinstance(other, Multivector):
            return NotImplemented
        return self._product(other, self.algebra.inner_mask)

    def commutator(self, other: "Multivector") -> "Multivector":
        """Commutator product ``(AB - BA) / 2``."""
        return (self * other - other * self) / 2.0

    # -- involutions and grade surgery -----------------------------------

    def grade(self, k: int) -> "Multivector":
        """Projection onto grade ``k``."""
        if not 0 <= k <= self.algebra.dim:
            raise ValueError(f"grade {k} outside 0..{self.algebra.dim}")
        out = np.where(self.algebra.grades == k, self.coeffs, 0.0)
        return Multivector(self.algebra, out)

    def even(self) -> "Multivector":
        """Projection onto the even subalgebra (grades 0, 2, 4, ...)."""
        out = np.where(self.algebra.grades % 2 == 0, self.coeffs, 0.0)
        return Multivector(self.algebra, out)

    def reverse(self) -> "Multivector":
        """Reversion: each grade-k part picks up ``(-1)**(k*(k-1)//2)``."""
        k = self.algebra.grades.astype(int)
        signs = np.where(k * (k - 1) // 2 % 2 == 0, 1.0, -1.0)
        return Multivector(self.algebra, signs * self.coeffs)

    def inverse(self) -> "Multivector":
        """Inverse of a versor (in particular of any nonzero blade).

        Uses ``X^{-1} = X~ / (X X~)`` and raises ``ZeroDivisionError``
        when ``X X~`` is not an invertible scalar.
        """
        rev = self.reverse()
        prod = self * rev
        s = prod.scalar_part()
        if abs(s) < 1e-300 or not np.allclose(prod.coeffs[1:], 0.0, atol=1e-12 * max(abs(s), 1.0)):
            raise ZeroDivisionError(f"{self} has no versor inverse")
        return rev / s

    def dual(self) -> "Multivector":
        """Dual ``A I_n^{-1}`` (right multiplication by the inverse
        pseudoscalar), sending grade k to grade n - k."""
        return self * self.algebra.pseudoscalar_inverse()

    def undual(self) -> "Multivector":
        """Inverse of :meth:`dual`: right multiplication by ``I_n``."""
        return self * self.algebra.pseudoscalar()

    # -- comparison ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.algebra is other.algebra and bool(
            np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.algebra.dim, self.coeffs.tobytes()))

    def isclose(self, other: "Multivector", atol: float = 1e-12, rtol: float = 1e-9) -> bool:
        self._check_algebra(other)
        return bool(np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=rtol))

    # -- text form ---------------------------------------------------------

    def __str__(self) -> str:
        return format_multivector(self)

    def __repr__(self) -> str:
        return f"<G_{self.algebra.dim} {format_multivector(self)}>"


def format_multivector(mv: Multivector, digits: int = 12) -> str:
    """Canonical text form: terms in blade-mask order, ``1.0`` coefficients
    elided, e.g. ``"2 + e13 - 0.5 e123"``.  The zero multivector prints
    as ``"0"``."""
    parts: list[str] = []
    for mask in np.flatnonzero(mv.coeffs):
        c = float(mv.coeffs[mask])
        mag = abs(c)
        name = blade_name(int(mask))
        if mask == 0:
            body = f"{mag:.{digits}g}"
        elif mag == 1.0:
            body = name
        else:
            body = f"{mag:.{digits}g} {name}"
        if not parts:
            parts.append(body if c >= 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c >= 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def project_reject(a: Multivector, onto: Multivector) -> tuple[Multivector, Multivector]:
    """Split ``a`` into components on and off an invertible blade.

    The projection acts grade by grade as ``(A_k . B) B^{-1}`` using the
    fat-dot inner product; since the fat dot annihilates scalar factors,
    a grade-0 part of ``a`` lands entirely in the rejection.  Returns
    ``(projection, rejection)`` with ``projection + rejection == a``.
    """
    a._check_algebra(onto)
    inv = onto.inverse()
    proj = a.algebra.zero()
    for k in sorted(a.grades() - {0}):
        proj = proj + ((a.grade(k) | onto) * inv).grade(k)
    return proj, a - proj


def batch_product(alg: Algebra, a: np.ndarray, b: np.ndarray,
                  mask: np.ndarray | None = None) -> np.ndarray:
    """Row-wise product of two stacks of coefficient vectors.

    ``a`` and ``b`` are coefficient arrays of shape ``(N, 2**dim)`` or
    ``(2**dim,)`` (broadcast against the other operand).  Returns the
    stack of products with the optional blade-pair ``mask`` selecting
    the outer or inner part.  Row ``r`` of the result equals
    ``Multivector(alg, a[r]) * Multivector(alg, b[r])`` but the loop
    runs over blade slots instead of rows, which is what makes
    quadrature over many nodes cheap.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim == 1:
        a = a[None, :]
    if b.ndim == 1:
        b = b[None, :]
    rows = max(a.shape[0], b.shape[0])
    out = np.zeros((rows, alg.size))
    for i in np.flatnonzero(np.any(a != 0.0, axis=0)):
        row = alg.sign_table[i].astype(float)
        if mask is not None:
            row = row * mask[i]
        out[:, alg.blade_table[i]] += a[:, i, None] * (row[None, :] * b)
    return out
