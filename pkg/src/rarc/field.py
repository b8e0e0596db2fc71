"""Finite fields with the rack-structured evaluation-point family.

Symbols are plain ints in ``[0, q - 1]``.  A field object carries the rack
size ``u`` together with a primitive element ``xi`` and an element ``eta``
of multiplicative order exactly ``u``.  The evaluation points

    lam[e * u + g] = xi**e * eta**g     (e = rack index, g = slot in rack)

are pairwise distinct and nonzero whenever ``q > n``, and satisfy
``lam**u == xi**(e*u)`` independent of ``g`` -- the identity every repair
path in this package leans on.

Two concrete fields are provided: GF(256) under the classic Reed-Solomon
modulus, and prime fields GF(p).  ``make_field`` picks a legal field for a
given cluster shape.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ParameterError

#: x^8 + x^4 + x^3 + x^2 + 1, a standard irreducible modulus for GF(2^8).
GF256_MODULUS = 0x11D


def _gf2_mul(a: int, b: int) -> int:
    # Carry-less "Russian peasant" multiply, reduced mod GF256_MODULUS.
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= GF256_MODULUS
    return r


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    i = 3
    while i * i <= m:
        if m % i == 0:
            return False
        i += 2
    return True


def multiplicative_order(field, a: int) -> int:
    """Smallest m >= 1 with a**m == 1.  Raises for the zero element."""
    if a == 0:
        raise ParameterError("the zero element has no multiplicative order")
    x = a
    for m in range(1, field.q + 1):
        if x == 1:
            return m
        x = field.mul(x, a)
    raise ParameterError("element order exceeds group size; arithmetic is broken")


def find_primitive(field) -> int:
    """Smallest element of multiplicative order q - 1.

    ``field`` only needs ``q`` and ``mul``; brute-force order checks keep the
    selection deterministic and assumption-free.
    """
    if field.q == 2:
        return 1
    for g in range(2, field.q):
        if multiplicative_order(field, g) == field.q - 1:
            return g
    raise ParameterError("no primitive element found; arithmetic is broken")


def derive_eta(field, u: int | None = None) -> int:
    """xi**((q-1)/u), verified to have multiplicative order exactly u."""
    if u is None:
        u = field.u
    if u < 1 or (field.q - 1) % u != 0:
        raise ParameterError(f"u={u} does not divide q-1={field.q - 1}")
    eta = field.pow(field.xi, (field.q - 1) // u)
    if multiplicative_order(field, eta) != u:
        raise ParameterError("derived eta does not have order u; arithmetic is broken")
    return eta


class FieldSpec:
    """Base class: arithmetic comes from subclasses, structure lives here.

    Attributes: ``kind``, ``modulus``, ``q``, ``u``, ``xi``, ``eta``.
    """

    kind: str = "abstract"
    modulus: int = 0
    q: int = 0

    def __init__(self, u: int):
        if u < 2:
            raise ParameterError("rack size u must be at least 2")
        if (self.q - 1) % u != 0:
            raise ParameterError(f"u={u} does not divide q-1={self.q - 1}")
        self.u = u
        self.xi = find_primitive(self)
        self.eta = derive_eta(self, u)

    # -- scalar arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def sub(self, a: int, b: int) -> int:
        raise NotImplementedError

    def neg(self, a: int) -> int:
        raise NotImplementedError

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def pow(self, a: int, e: int) -> int:
        raise NotImplementedError

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- serialization and batch kernels ------------------------------------

    @property
    def symbol_width(self) -> int:
        """Bytes per serialized symbol: little-endian, minimal width."""
        return 1 if self.q <= 256 else 2

    @property
    def np_dtype(self):
        return np.uint8 if self.q <= 256 else np.uint16

    def np_add(self, a, b):
        raise NotImplementedError

    def np_neg(self, a):
        raise NotImplementedError

    def np_mul(self, a, b):
        raise NotImplementedError

    def np_matmul(self, a, b):
        raise NotImplementedError


class Gf256Field(FieldSpec):
    """GF(2^8) under ``GF256_MODULUS`` with log/exp table arithmetic."""

    kind = "gf256"
    modulus = GF256_MODULUS
    q = 256

    def __init__(self, u: int):
        # Locate the smallest primitive element with raw carry-less
        # multiplication, then base the log/exp tables on it.
        base = 0
        for g in range(2, 256):
            x, m = g, 1
            while x != 1:
                x = _gf2_mul(x, g)
                m += 1
            if m == 255:
                base = g
                break
        if base == 0:
            raise ParameterError("no primitive element in GF(256); modulus is not primitive")
        exp = [0] * 510
        log = [0] * 256
        x = 1
        for i in range(255):
            exp[i] = x
            log[x] = i
            x = _gf2_mul(x, base)
        exp[255:510] = exp[0:255]
        self._exp = exp
        self._log = log
        self._np_exp = np.array(exp, dtype=np.uint8)
        self._np_log = np.array(log, dtype=np.int64)
        # 256x256 product table: row/column 0 are zero, so batched products
        # need no special-casing.
        idx = (self._np_log[:, None] + self._np_log[None, :]) % 255
        table = self._np_exp[idx]
        table[0, :] = 0
        table[:, 0] = 0
        self._mul_table = table
        super().__init__(u)

    def add(self, a, b):
        return a ^ b

    def sub(self, a, b):
        return a ^ b

    def neg(self, a):
        return a

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[255 - self._log[a]]

    def pow(self, a, e):
        if e < 0:
            raise ParameterError("negative exponent; invert explicitly")
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % 255]

    def np_add(self, a, b):
        return np.bitwise_xor(np.asarray(a, dtype=np.uint8), np.asarray(b, dtype=np.uint8))

    def np_neg(self, a):
        return np.asarray(a, dtype=np.uint8).copy()

    def np_mul(self, a, b):
        return self._mul_table[np.asarray(a, dtype=np.uint8), np.asarray(b, dtype=np.uint8)]

    def np_matmul(self, a, b):
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
        for j in range(a.shape[1]):
            out ^= self._mul_table[a[:, j][:, None], b[j, :][None, :]]
        return out

    def __repr__(self):
        return f"Gf256Field(u={self.u})"


class PrimeField(FieldSpec):
    """GF(p) for a prime p, with native modular arithmetic."""

    kind = "prime"

    def __init__(self, p: int, u: int):
        if not _is_prime(p):
            raise ParameterError(f"{p} is not prime")
        self.modulus = p
        self.q = p
        super().__init__(u)

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def mul(self, a, b):
        return (a * b) % self.q

    def inv(self, a):
        if a % self.q == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.q)

    def pow(self, a, e):
        if e < 0:
            raise ParameterError("negative exponent; invert explicitly")
        return pow(a, e, self.q)

    def np_add(self, a, b):
        out = (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % self.q
        return out.astype(self.np_dtype)

    def np_neg(self, a):
        out = (self.q - np.asarray(a, dtype=np.int64)) % self.q
        return out.astype(self.np_dtype)

    def np_mul(self, a, b):
        out = (np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % self.q
        return out.astype(self.np_dtype)

    def np_matmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return ((a @ b) % self.q).astype(self.np_dtype)

    def __repr__(self):
        return f"PrimeField(p={self.q}, u={self.u})"


def smallest_prime_field(n: int, u: int) -> int:
    """Smallest prime p > n with u | (p - 1)."""
    p = n + 1
    while True:
        if _is_prime(p) and (p - 1) % u == 0:
            return p
        p += 1


def make_field(n: int, u: int, preference: str = "auto") -> FieldSpec:
    """Pick a field for an n-node cluster with racks of size u.

    Both codes need ``u | (q - 1)`` and ``q > n``.  GF(256) qualifies only
    when ``u | 255`` and ``n < 256``; the prime fallback is the smallest
    prime ``p > n`` with ``u | (p - 1)``.  ``auto`` prefers GF(256) when it
    is legal, keeping symbols byte-sized.
    """
    if n < 2:
        raise ParameterError("need at least two nodes")
    if u < 2:
        raise ParameterError("rack size u must be at least 2")
    if n % u != 0:
        raise ParameterError(f"rack size u={u} does not divide node count n={n}")
    gf256_ok = (255 % u == 0) and n < 256
    if preference == "gf256":
        if not gf256_ok:
            raise ParameterError(
                f"GF(256) is not legal for n={n}, u={u}: need u | 255 and n < 256"
            )
        return Gf256Field(u)
    if preference == "prime":
        return PrimeField(smallest_prime_field(n, u), u)
    if preference == "auto":
        if gf256_ok:
            return Gf256Field(u)
        return PrimeField(smallest_prime_field(n, u), u)
    raise ParameterError(f"unknown field preference {preference!r}")


def field_from_descriptor(kind: str, modulus: int, u: int) -> FieldSpec:
    """Rebuild a field from its serialized (kind, modulus) descriptor."""
    if kind == "gf256":
        if modulus != GF256_MODULUS:
            raise ParameterError(f"unsupported GF(256) modulus {modulus:#x}")
        return Gf256Field(u)
    if kind == "prime":
        return PrimeField(modulus, u)
    raise ParameterError(f"unknown field kind {kind!r}")


def eval_points(field: FieldSpec, nbar: int) -> list[int]:
    """The n = nbar * u evaluation points lam[e*u+g] = xi**e * eta**g.

    All points are nonzero and pairwise distinct; a duplicate means the
    field is too small for the cluster and is reported as such.
    """
    u = field.u
    lam = []
    for e in range(nbar):
        xe = field.pow(field.xi, e)
        for g in range(u):
            lam.append(field.mul(xe, field.pow(field.eta, g)))
    if 0 in lam or len(set(lam)) != len(lam):
        raise ParameterError(
            f"evaluation points collide for nbar={nbar}, u={u} over q={field.q}"
        )
    return lam


def serialize_symbols(field: FieldSpec, symbols: Sequence[int]) -> bytes:
    """Little-endian fixed-width packing per the symbol width rule."""
    arr = np.asarray(symbols)
    if arr.size and (arr.min() < 0 or arr.max() >= field.q):
        raise ParameterError("symbol out of field range")
    dtype = "<u1" if field.symbol_width == 1 else "<u2"
    return arr.astype(dtype).tobytes()


def deserialize_symbols(field: FieldSpec, data: bytes) -> list[int]:
    dtype = "<u1" if field.symbol_width == 1 else "<u2"
    arr = np.frombuffer(data, dtype=dtype)
    if arr.size and arr.max() >= field.q:
        raise ParameterError("serialized symbol out of field range")
    return [int(v) for v in arr]
