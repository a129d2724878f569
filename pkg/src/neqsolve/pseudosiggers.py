"""An explicit 6-ary polymorphism witnessing the pseudo-Siggers identity for
the groups Z_n^(omega) (+) Z_{2n}.

Elements are written over a basis b (order 2n) and a_1, a_2, ... (order n
each, finitely supported).  The operation f sends argument k's a-levels into
private levels via an index pairing, re-emits each argument's b-coefficient
at level k, and mixes the b-coefficients with weights summing to an odd
multiple of n's complement, which makes f injective on tuples that differ in
every coordinate.  The level swap alpha = (12)(34)(56), extended along the
pairing, satisfies alpha(f(x,y,x,z,y,z)) = f(y,x,z,x,z,y).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

_B_WEIGHTS = (1, 2, 2, 1, 1, 2)  # per-slot b mixing; sum 9 (odd) on purpose
_SIGMA = {1: 2, 2: 1, 3: 4, 4: 3, 5: 6, 6: 5}


def pair_index(slot: int, level: int) -> int:
    """Bijection {1..6} x {1,2,...} -> {7,8,...}: the private level that
    argument `slot` sends its `level` coefficient to."""
    if not 1 <= slot <= 6:
        raise ValueError("slot must be in 1..6")
    if level < 1:
        raise ValueError("level must be >= 1")
    return 6 * (level - 1) + slot + 6


def pair_index_inv(idx: int) -> tuple[int, int]:
    if idx < 7:
        raise ValueError("paired levels start at 7")
    t = idx - 7
    return t % 6 + 1, t // 6 + 1


@dataclass(frozen=True)
class TruncElement:
    """Element of Z_n^(omega) (+) Z_{2n}: b-coefficient in Z_{2n} plus a
    finitely supported level -> Z_n coefficient map (levels >= 1)."""

    n: int
    b: int
    a: tuple[tuple[int, int], ...]

    @staticmethod
    def make(n: int, b: int, a=()) -> "TruncElement":
        if n < 1:
            raise ValueError("n must be >= 1")
        acc: dict[int, int] = {}
        for lvl, coeff in dict(a).items():
            if lvl < 1:
                raise ValueError("levels start at 1")
            c = coeff % n
            if c:
                acc[lvl] = c
        return TruncElement(n, b % (2 * n), tuple(sorted(acc.items())))

    def a_map(self) -> dict[int, int]:
        return dict(self.a)

    def support(self) -> int:
        """Highest level carrying a nonzero coefficient (0 when none)."""
        return self.a[-1][0] if self.a else 0

    def add(self, other: "TruncElement") -> "TruncElement":
        if self.n != other.n:
            raise ValueError("mismatched n")
        acc = self.a_map()
        for lvl, c in other.a:
            acc[lvl] = acc.get(lvl, 0) + c
        return TruncElement.make(self.n, self.b + other.b, acc)

    def neg(self) -> "TruncElement":
        return TruncElement.make(self.n, -self.b, {l: -c for l, c in self.a})


def zero(n: int) -> TruncElement:
    return TruncElement.make(n, 0)


def b_elem(n: int, coeff: int = 1) -> TruncElement:
    return TruncElement.make(n, coeff)


def a_elem(n: int, level: int, coeff: int = 1) -> TruncElement:
    return TruncElement.make(n, 0, {level: coeff})


def eval_f(n: int, args) -> TruncElement:
    """The 6-ary operation: paired copies of each argument's a-part, the
    argument b-coefficients re-emitted at levels 1..6 (mod n), and the
    weighted b mix."""
    args = tuple(args)
    if len(args) != 6:
        raise ValueError("f takes exactly 6 arguments")
    for x in args:
        if x.n != n:
            raise ValueError("mismatched n")
    b = sum(w * x.b for w, x in zip(_B_WEIGHTS, args))
    acc: dict[int, int] = {}
    for k, x in enumerate(args, start=1):
        if x.b % n:
            acc[k] = acc.get(k, 0) + x.b
        for lvl, c in x.a:
            tgt = pair_index(k, lvl)
            acc[tgt] = acc.get(tgt, 0) + c
    return TruncElement.make(n, b, acc)


def eval_alpha(n: int, x: TruncElement) -> TruncElement:
    """The automorphism swapping levels (12)(34)(56), extended to the paired
    levels slot-wise; identity on b.  An involution."""
    if x.n != n:
        raise ValueError("mismatched n")
    acc: dict[int, int] = {}
    for lvl, c in x.a:
        if lvl <= 6:
            acc[_SIGMA[lvl]] = c
        else:
            slot, level = pair_index_inv(lvl)
            acc[pair_index(_SIGMA[slot], level)] = c
    return TruncElement.make(n, x.b, acc)


@dataclass
class CheckOutcome:
    run: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, detail):
        self.run += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < 5:
                self.failures.append(detail)
        return ok


@dataclass
class SiggersReport:
    n: int
    truncation: int
    samples: int
    seed: int
    identity: CheckOutcome
    distinctness: CheckOutcome
    alpha_involution: CheckOutcome
    alpha_additive: CheckOutcome
    f_additive: CheckOutcome
    failure_count: int
    passed: bool

    def to_json(self) -> dict:
        def enc(c: CheckOutcome):
            return {"run": c.run, "failed": c.failed, "examples": c.failures}

        return {
            "n": self.n,
            "truncation": self.truncation,
            "samples": self.samples,
            "seed": self.seed,
            "checks": {
                "identity": enc(self.identity),
                "distinctness": enc(self.distinctness),
                "alpha_involution": enc(self.alpha_involution),
                "alpha_additive": enc(self.alpha_additive),
                "f_additive": enc(self.f_additive),
            },
            "passed": self.passed,
        }


def _sample(rng: random.Random, n: int, truncation: int) -> TruncElement:
    a = {}
    for lvl in range(1, truncation + 1):
        c = rng.randrange(n)
        if c:
            a[lvl] = c
    return TruncElement.make(n, rng.randrange(2 * n), a)


def _sample_distinct(rng, n, truncation, avoid: TruncElement) -> TruncElement:
    while True:
        x = _sample(rng, n, truncation)
        if x != avoid:
            return x


def verify_pseudo_siggers(
    n: int, truncation: int = 8, samples: int = 10_000, seed: int = 0
) -> SiggersReport:
    """Sampled verification: the two-sided identity on argument triples, the
    no-collision property on componentwise-distinct 6-tuples, and additivity
    and involution spot checks.  Deterministic for a fixed seed."""
    rng = random.Random(seed)
    identity = CheckOutcome()
    distinct = CheckOutcome()
    alpha_inv = CheckOutcome()
    alpha_add = CheckOutcome()
    f_add = CheckOutcome()
    bound = 6 + 6 * truncation

    for _ in range(samples):
        x, y, z = (_sample(rng, n, truncation) for _ in range(3))
        lhs = eval_alpha(n, eval_f(n, (x, y, x, z, y, z)))
        rhs = eval_f(n, (y, x, z, x, z, y))
        assert lhs.support() <= bound and rhs.support() <= bound
        identity.record(
            lhs == rhs,
            {"x": repr(x), "y": repr(y), "z": repr(z)},
        )

    for _ in range(samples):
        u = tuple(_sample(rng, n, truncation) for _ in range(6))
        v = tuple(_sample_distinct(rng, n, truncation, u[k]) for k in range(6))
        fu = eval_f(n, u)
        fv = eval_f(n, v)
        assert fu.support() <= bound and fv.support() <= bound
        distinct.record(fu != fv, {"u": repr(u), "v": repr(v)})

    spot = min(1000, samples)
    for _ in range(spot):
        x = _sample(rng, n, truncation)
        y = _sample(rng, n, truncation)
        alpha_inv.record(eval_alpha(n, eval_alpha(n, x)) == x, {"x": repr(x)})
        alpha_add.record(
            eval_alpha(n, x.add(y)) == eval_alpha(n, x).add(eval_alpha(n, y)),
            {"x": repr(x), "y": repr(y)},
        )
        u = tuple(_sample(rng, n, truncation) for _ in range(6))
        w = tuple(_sample(rng, n, truncation) for _ in range(6))
        f_add.record(
            eval_f(n, tuple(a.add(b) for a, b in zip(u, w)))
            == eval_f(n, u).add(eval_f(n, w)),
            {"u": repr(u), "w": repr(w)},
        )

    checks = (identity, distinct, alpha_inv, alpha_add, f_add)
    failure_count = sum(c.failed for c in checks)
    passed = failure_count == 0
    return SiggersReport(
        n, truncation, samples, seed, identity, distinct, alpha_inv, alpha_add, f_add,
        failure_count, passed,
    )
