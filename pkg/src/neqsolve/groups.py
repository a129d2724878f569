"""Descriptors of countable abelian groups of finite exponent and their
classification.

A descriptor is a finite list of components (p, n, s): the direct sum of s
copies of Z_{p^n}, s a positive integer or omega.  Two descriptors denote
mutually embeddable groups iff they agree, for every prime, on m_p (the
largest level occurring with multiplicity omega) and on the finite
multiplicities above m_p; everything at or below m_p is absorbed.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

OMEGA = math.inf

Mult = Union[int, float]


def is_omega(s: Mult) -> bool:
    return s == OMEGA


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _check_mult(s: Mult) -> None:
    if is_omega(s):
        return
    if not isinstance(s, int) or isinstance(s, bool) or s < 1:
        raise ValueError(f"multiplicity must be a positive integer or omega: {s!r}")


@dataclass(frozen=True)
class GroupDescriptor:
    components: tuple[tuple[int, int, Mult], ...]  # (prime, level, multiplicity)

    @staticmethod
    def make(components) -> "GroupDescriptor":
        merged: dict[tuple[int, int], Mult] = {}
        for p, n, s in components:
            if not _is_prime(p):
                raise ValueError(f"not a prime: {p}")
            if not isinstance(n, int) or n < 1:
                raise ValueError(f"level must be a positive integer: {n!r}")
            _check_mult(s)
            key = (p, n)
            if key in merged:
                prev = merged[key]
                merged[key] = OMEGA if (is_omega(prev) or is_omega(s)) else prev + s
            else:
                merged[key] = s
        return GroupDescriptor(tuple((p, n, merged[(p, n)]) for p, n in sorted(merged)))

    @property
    def is_trivial(self) -> bool:
        return not self.components

    def primes(self) -> tuple[int, ...]:
        return tuple(sorted({p for p, _, _ in self.components}))

    def primary_part(self, p: int) -> dict[int, Mult]:
        """level -> multiplicity map of the p-part."""
        return {n: s for q, n, s in self.components if q == p}

    def exponent(self) -> int:
        out = 1
        for p in self.primes():
            out *= p ** max(self.primary_part(p))
        return out


TRIVIAL = GroupDescriptor(())

_ATOM_RE = re.compile(r"(\d+)\^(\d+):(\d+|w)\Z")


def parse_descriptor(text: str) -> GroupDescriptor:
    s = text.strip()
    if s == "1":
        return TRIVIAL
    comps = []
    for chunk in s.split("+"):
        chunk = chunk.strip()
        m = _ATOM_RE.match(chunk)
        if not m:
            raise ValueError(f"bad descriptor component: {chunk!r} (expected p^n:s or '1')")
        p, n = int(m.group(1)), int(m.group(2))
        mult: Mult = OMEGA if m.group(3) == "w" else int(m.group(3))
        comps.append((p, n, mult))
    return GroupDescriptor.make(comps)


def format_descriptor(d: GroupDescriptor) -> str:
    if d.is_trivial:
        return "1"
    parts = sorted(d.components, key=lambda c: (c[0], -c[1]))
    return " + ".join(f"{p}^{n}:{'w' if is_omega(s) else s}" for p, n, s in parts)


@dataclass(frozen=True)
class BiEmbedClass:
    """Per-prime invariant of mutual embeddability: (p, m_p, finite part
    above m_p); primes with trivial invariant omitted."""

    parts: tuple[tuple[int, int, tuple[tuple[int, int], ...]], ...]


def biembed_normal_form(d: GroupDescriptor) -> BiEmbedClass:
    parts = []
    for p in d.primes():
        levels = d.primary_part(p)
        m_p = max((n for n, s in levels.items() if is_omega(s)), default=0)
        finite = tuple(sorted((n, int(s)) for n, s in levels.items() if n > m_p))
        if m_p or finite:
            parts.append((p, m_p, finite))
    return BiEmbedClass(tuple(parts))


def biembeddable(d1: GroupDescriptor, d2: GroupDescriptor) -> bool:
    return biembed_normal_form(d1) == biembed_normal_form(d2)


def quotient_by_involution(d: GroupDescriptor, level: int) -> GroupDescriptor:
    """Quotient of a 2-group by the order-2 subgroup generated inside a
    Z_{2^level} summand: that summand drops a level, the rest is unchanged."""
    if any(p != 2 for p, _, _ in d.components):
        raise ValueError("quotient_by_involution applies to 2-group descriptors")
    levels = d.primary_part(2)
    if level not in levels:
        raise ValueError(f"no component at level {level}")
    comps = []
    for n, s in levels.items():
        if n == level:
            if not is_omega(s):
                s = s - 1
            if s != 0:
                comps.append((2, n, s))
        else:
            comps.append((2, n, s))
    if level >= 2:
        comps.append((2, level - 1, 1))
    return GroupDescriptor.make(comps)


def has_square_embedding(d: GroupDescriptor) -> bool:
    """Whether the square of the group embeds back: holds exactly when no
    prime keeps a finite multiplicity above its omega-level."""
    return all(not finite for _, _, finite in biembed_normal_form(d).parts)


@dataclass(frozen=True)
class Tractable:
    m: int
    with_double: bool


@dataclass(frozen=True)
class NPHard:
    pass


Classification = Union[Tractable, NPHard]


def classify(d: GroupDescriptor) -> Classification:
    """Tractable targets are exactly those mutually embeddable with Z_m^(omega)
    or Z_m^(omega) (+) Z_{2m}; everything else is NP-hard."""
    nf = biembed_normal_form(d)
    m = 1
    with_double = False
    for p, m_p, finite in nf.parts:
        if p == 2:
            if finite and finite != ((m_p + 1, 1),):
                return NPHard()
            with_double = bool(finite)
        elif finite:
            return NPHard()
        m *= p**m_p
    return Tractable(m, with_double)


def general_decomposition(d: GroupDescriptor) -> tuple[int, tuple[int, ...]]:
    """(n, finite-part moduli): the group is mutually embeddable with
    Z_n^(omega) (+) the direct sum of the returned cyclic groups."""
    nf = biembed_normal_form(d)
    n = 1
    moduli: list[int] = []
    for p, m_p, finite in nf.parts:
        n *= p**m_p
        for lvl, s in finite:
            moduli.extend([p**lvl] * s)
    return n, tuple(moduli)


def finite_moduli(d: GroupDescriptor) -> tuple[int, ...]:
    """Cyclic moduli of a fully finite descriptor."""
    out = []
    for p, n, s in d.components:
        if is_omega(s):
            raise ValueError("descriptor has an infinite multiplicity")
        out.extend([p**n] * s)
    return tuple(out)
