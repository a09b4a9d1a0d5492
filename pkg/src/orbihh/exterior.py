"""Sparse exterior algebra on a fixed ordered basis.

An element is a dict {mask: coefficient}; bit i of the mask is basis vector i,
and the monomial is the wedge of the set bits in increasing order.
"""

from __future__ import annotations

from math import factorial
from typing import Sequence

from .arith import Cyclotomic

Ext = dict  # {int mask: Cyclotomic}


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def merge_sign(a: int, b: int) -> int:
    """Sign of e_a ^ e_b relative to the sorted monomial e_(a|b); 0 on overlap."""
    if a & b:
        return 0
    swaps = 0
    while b:
        low = b & -b
        # elements of a above this bit of b must hop over it
        swaps += popcount(a & ~((low << 1) - 1))
        b ^= low
    return -1 if swaps & 1 else 1


def wedge(x: Ext, y: Ext) -> Ext:
    out: Ext = {}
    for ma, ca in x.items():
        for mb, cb in y.items():
            if ma & mb:
                continue
            s = merge_sign(ma, mb)
            c = ca * cb
            m = ma | mb
            if s < 0:
                c = -c
            prev = out.get(m)
            out[m] = c if prev is None else prev + c
    return {m: c for m, c in out.items() if c}


def add(x: Ext, y: Ext) -> Ext:
    out = dict(x)
    for m, c in y.items():
        prev = out.get(m)
        out[m] = c if prev is None else prev + c
    return {m: c for m, c in out.items() if c}


def scale(x: Ext, c) -> Ext:
    if not c:
        return {}
    return {m: v * c for m, v in x.items()}


def vector(v: Sequence[Cyclotomic]) -> Ext:
    """Degree-one element sum v_i e_i."""
    return {1 << i: c for i, c in enumerate(v) if c}


def wedge_vectors(vectors: Sequence[Sequence[Cyclotomic]], order: int = 1) -> Ext:
    out: Ext = {0: Cyclotomic.rational(1, order)}
    for v in vectors:
        out = wedge(out, vector(v))
        if not out:
            break
    return out


def bivector(coeffs, dim: int) -> Ext:
    """The 2-vector (1/2) sum_ij P_ij e_i ^ e_j for a skew matrix P."""
    out: Ext = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            c = coeffs[i, j]
            if c:
                out[(1 << i) | (1 << j)] = c
    return out


def divided_power(x: Ext, k: int, order: int = 1) -> Ext:
    """x^k / k! for an even element x."""
    out: Ext = {0: Cyclotomic.rational(1, order)}
    for _ in range(k):
        out = wedge(out, x)
    return scale(out, Cyclotomic.rational(1, order) / factorial(k)) if k > 1 else out


def image_of_monomial(mask: int, images: Sequence[Sequence[Cyclotomic]], order: int = 1) -> Ext:
    """Lambda(A) e_S where images[i] = A e_i."""
    return wedge_vectors([images[i] for i in bits(mask)], order)
