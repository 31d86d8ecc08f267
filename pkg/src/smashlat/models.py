"""Built-in models.

The truncation model is a finite fragment of the lattice generated by
Morava K-theory atoms.  An element is a pair ``(T, b)`` with ``T`` a set of
atoms and ``b`` recording whether the Brown-Comenetz element ``i`` lies below
it.  "Large" index sets (containing the infinity atom, or at least
``threshold`` other atoms) always sit above ``i``, so ``b`` is forced to 1
there.  The sphere is a separate top element above every pair.

Smash is ``(T, b) ^ (T', b') = (T & T', large(T & T'))``: disjoint atoms
annihilate and ``i ^ i = bottom``.  In particular the infinity atom (playing
the Eilenberg-MacLane class) annihilates ``i``, which is forced once a set of
atoms and its complement can both dominate ``i``.

None of these fragments reproduces the pseudo-complement of the genuine
lattice: ``pc`` only sees the elements present, so the truncation model fails
``pc(pc(x)) = x`` and the join-to-meet law for ``ra_op``, and it violates the
dichotomy statement at ``(kinf, k0+k1, i)``.  That failure is the intended
output, not a defect.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .modelio import ModelSpec, model_from_spec
from .order import MAX_SIZE, LatticeTooLarge, build_lattice
from .quantale import Model, build_model

INF = "kinf"


def _set_label(T):
    return "{" + ",".join(str(k) for k in sorted(T)) + "}"


def powerset_model(n: int) -> Model:
    if n > 6:
        raise LatticeTooLarge("powerset_model supports n <= 6")
    sets = [frozenset(c) for r in range(n + 1) for c in combinations(range(n), r)]
    labels = [_set_label(T) for T in sets]
    pairs = [(_set_label(T), _set_label(T | {k})) for T in sets for k in range(n) if k not in T]
    L = build_lattice(labels, pairs)
    idx = {T: L.index(_set_label(T)) for T in sets}
    table = {(idx[A], idx[B]): idx[A & B] for A in sets for B in sets}
    return build_model(L, table, "powerset%d" % n)


def _three_chain(name, middle, square):
    L = build_lattice(["bot", middle, "top"], [("bot", middle), (middle, "top")])
    m = L.index(middle)
    return build_model(L, {(m, m): L.index(square)}, name,
                       {middle: "I"} if square == "bot" else {})


def chain_i_model() -> Model:
    """bot < i < top with i ^ i = bot."""
    return _three_chain("chain_i", "i", "bot")


def idempotent_chain_model() -> Model:
    """bot < d < top with d ^ d = d; d is in DL but not in cBA."""
    return _three_chain("idempotent_chain", "d", "d")


@dataclass(frozen=True)
class TruncationParams:
    atoms: int = 2
    threshold: int = 2
    telescopes: int = 0

    def __post_init__(self):
        if self.atoms < 0 or self.telescopes < 0:
            raise ValueError("atom counts must be non-negative")
        if self.threshold < 1:
            raise ValueError("largeness threshold must be at least 1")

    @property
    def finite_atoms(self):
        return ["k%d" % k for k in range(self.atoms)] + ["t%d" % k for k in range(self.telescopes)]

    @property
    def omega(self):
        return self.finite_atoms + [INF]

    def large(self, T) -> bool:
        return INF in T or len(T) - (INF in T) >= self.threshold

    def carrier_size(self) -> int:
        omega = self.omega
        return 1 + sum(1 if self.large(set(T)) else 2
                       for r in range(len(omega) + 1) for T in combinations(omega, r))


def truncation_label(p: TruncationParams, T, b) -> str:
    if not T:
        return "i" if b else "bot"
    rank = {a: k for k, a in enumerate(p.omega)}
    name = "+".join(sorted(T, key=rank.get))
    if b and not p.large(T):
        name += "+i"
    return name


def truncation_elements(p: TruncationParams):
    """Canonical pairs ``(T, b)`` in a fixed enumeration order."""
    out = []
    omega = p.omega
    for r in range(len(omega) + 1):
        for T in combinations(omega, r):
            T = frozenset(T)
            out.append((T, 1))
            if not p.large(T):
                out.append((T, 0))
    return out


def k_truncation_model(p: TruncationParams | None = None, **kw) -> Model:
    p = p or TruncationParams(**kw)
    if p.carrier_size() > MAX_SIZE:
        raise LatticeTooLarge("truncation with %s has %d elements; at most %d supported"
                              % (p, p.carrier_size(), MAX_SIZE))
    pairs = truncation_elements(p)
    label = {x: truncation_label(p, *x) for x in pairs}
    gens = [(label[x], "top") for x in pairs]
    for T, b in pairs:
        if b == 0:
            gens.append((label[T, 0], label[T, 1]))
        for a in p.omega:
            if a not in T:
                U = T | {a}
                gens.append((label[T, b], label[U, 1 if p.large(U) else b]))
    L = build_lattice(list(label.values()) + ["top"], gens)
    idx = {x: L.index(label[x]) for x in pairs}
    table = {}
    for x in pairs:
        for y in pairs:
            T = x[0] & y[0]
            table[idx[x], idx[y]] = idx[T, 1 if p.large(T) else 0]
    roles = {"i": "I", "top": "S", INF: "K(inf)"}
    roles.update({a: "%s(%s)" % (a[0].upper(), a[1:]) for a in p.finite_atoms})
    name = "k_truncation_%d_%d" % (p.atoms, p.threshold)
    if p.telescopes:
        name += "_%d" % p.telescopes
    return build_model(L, table, name, roles)


def naive_sphere_model(n: int = 2, separate_top: bool = False) -> ModelSpec:
    """Spec of a model whose top is the join of ``n`` K-atoms and ``i``.

    Every atom annihilates ``i``, so distributivity forces ``i ^ top = bot``
    and the unit law fails at ``i``.  With ``separate_top`` a fresh top is put
    above that join and the spec becomes valid.
    """
    if n < 1:
        raise ValueError("naive sphere needs at least one K-atom")
    atoms = ["k%d" % k for k in range(n)] + ["i"]
    sets = [frozenset(c) for r in range(len(atoms) + 1) for c in combinations(atoms, r)]
    full = frozenset(atoms)

    def name(S):
        if not S:
            return "bot"
        if S == full and not separate_top:
            return "top"
        return "+".join(a for a in atoms if a in S)

    spec = ModelSpec(name="naive_sphere%d" % n)
    spec.elements = [name(S) for S in sets]
    spec.order = [(name(S), name(S | {a})) for S in sets for a in atoms if a not in S]
    for a, b in combinations(sets[1:], 2):
        spec.smash.append((name(a), name(b), name((a & b) - {"i"})))
    for a in sets[1:]:
        spec.smash.append((name(a), name(a), name(a - {"i"})))
    if separate_top:
        spec.elements.append("top")
        spec.order.append((name(full), "top"))
    return spec


BUILTINS = {
    "powerset": powerset_model,
    "chain-i": chain_i_model,
    "idempotent-chain": idempotent_chain_model,
    "k-truncation": k_truncation_model,
    "naive-sphere": naive_sphere_model,
}


def builtin(name: str, **params):
    """Model (or, for naive-sphere, ModelSpec) by CLI name."""
    if name not in BUILTINS:
        raise KeyError("unknown builtin %r; choose from %s" % (name, ", ".join(BUILTINS)))
    return BUILTINS[name](**params)


def all_valid_builtins():
    return [
        powerset_model(0),
        powerset_model(1),
        powerset_model(2),
        powerset_model(3),
        chain_i_model(),
        idempotent_chain_model(),
        k_truncation_model(TruncationParams(2, 2)),
        k_truncation_model(TruncationParams(1, 1)),
        k_truncation_model(TruncationParams(2, 1, 1)),
        model_from_spec(naive_sphere_model(2, separate_top=True)),
    ]
