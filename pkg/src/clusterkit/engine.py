"""Seed mutation oracle and exhaustive cluster-variable enumeration.

The exchange relation replaces one cluster entry by (product over incoming
arrows + product over outgoing arrows) / old entry.  The division is carried
out by leading-term elimination and then certified exact by multiplying
back; a failure raises InexactDivision and indicates a bug, never bad input.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import (
    ExplosionGuard,
    FrozenVertex,
    InexactDivision,
    NotAClusterVariableDVector,
    NotHomogeneous,
    NotLinearSubquiver,
)
from .laurent import LaurentPoly, mono_degree, mono_mul, poly_product
from .quiver import Quiver, exchange_matrix, mutate, path_order


def _term_order_key(m, support):
    d = dict(m)
    return (mono_degree(m), tuple(d.get(v, 0) for v in support))


def exact_divide(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """Certified exact division in the Laurent ring.

    Iterated leading-term elimination under the graded order; the candidate
    quotient is multiplied back and compared with the numerator."""
    if d.is_zero():
        raise InexactDivision("division by zero")
    if p.is_zero():
        return LaurentPoly.zero()
    support = sorted(set(p.support()) | set(d.support()))
    key = lambda m: _term_order_key(m, support)
    lead_d = max(d.terms, key=key)
    coeff_d = d.terms[lead_d]
    inv_lead_d = tuple((v, -e) for v, e in lead_d)
    quotient: dict = {}
    remainder = dict(p.terms)
    cap = 16 * (len(p.terms) + len(d.terms) + 4)
    while remainder:
        cap -= 1
        if cap < 0:
            raise InexactDivision("leading-term elimination did not terminate")
        lead_r = max(remainder, key=key)
        coeff_r = remainder[lead_r]
        if coeff_r % coeff_d:
            raise InexactDivision("leading coefficient not divisible")
        t = mono_mul(lead_r, inv_lead_d)
        c = coeff_r // coeff_d
        quotient[t] = quotient.get(t, 0) + c
        for m, cd in d.terms.items():
            mm = mono_mul(t, m)
            nc = remainder.get(mm, 0) - c * cd
            if nc:
                remainder[mm] = nc
            elif mm in remainder:
                del remainder[mm]
    q = LaurentPoly(quotient)
    if q * d != p:
        raise InexactDivision("quotient verification failed")
    return q


@dataclass(frozen=True)
class Seed:
    """A quiver together with one Laurent polynomial per vertex.  Frozen
    positions hold coefficient variables that never change."""

    quiver: Quiver
    cluster: tuple[LaurentPoly, ...]

    def entry(self, v: int) -> LaurentPoly:
        return self.cluster[v - 1]


def initial_seed(q: Quiver) -> Seed:
    return Seed(q, tuple(LaurentPoly.variable(i) for i in q.vertices))


def mutate_seed(s: Seed, v: int) -> Seed:
    if v in s.quiver.frozen:
        raise FrozenVertex(f"cannot mutate frozen vertex {v}")
    inc = poly_product(s.entry(t) for t in s.quiver.arrows_in(v))
    out = poly_product(s.entry(h) for h in s.quiver.arrows_out(v))
    new_entry = exact_divide(inc + out, s.entry(v))
    cluster = list(s.cluster)
    cluster[v - 1] = new_entry
    return Seed(mutate(s.quiver, v), tuple(cluster))


def mutate_seed_sequence(s: Seed, vertices) -> Seed:
    for v in vertices:
        s = mutate_seed(s, v)
    return s


def _seed_key(s: Seed):
    """Canonical key insensitive to permuting the unfrozen positions."""
    unfrozen = s.quiver.unfrozen
    order = sorted(unfrozen, key=lambda v: s.entry(v).key())
    relabel = {old: new + 1 for new, old in enumerate(order)}
    nxt = len(order) + 1
    for v in sorted(s.quiver.frozen):
        relabel[v] = nxt
        nxt += 1
    arrows = tuple(sorted((relabel[t], relabel[h]) for t, h in s.quiver.arrows))
    entries = tuple(s.entry(v).key() for v in order)
    return (arrows, entries)


def enumerate_seeds(q: Quiver, max_seeds: int = 100_000):
    """Breadth-first walk of the exchange graph with permutation-insensitive
    seed deduplication.  Deterministic order; raises ExplosionGuard past the
    bound (a sign the input is not of finite type)."""
    start = initial_seed(q)
    visited = {_seed_key(start)}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        yield s
        for v in s.quiver.unfrozen:
            s2 = mutate_seed(s, v)
            k = _seed_key(s2)
            if k not in visited:
                if len(visited) >= max_seeds:
                    raise ExplosionGuard(
                        f"more than {max_seeds} seeds; input looks infinite-type")
                visited.add(k)
                queue.append(s2)


def enumerate_cluster_variables(
    q: Quiver, max_seeds: int = 100_000
) -> dict[tuple[int, ...], LaurentPoly]:
    """Every cluster variable keyed by its denominator vector (in the
    unfrozen initial variables; initial variables get minus a unit vector)."""
    nuf = len(q.unfrozen)
    out: dict[tuple[int, ...], LaurentPoly] = {}
    for s in enumerate_seeds(q, max_seeds):
        for v in s.quiver.unfrozen:
            poly = s.entry(v)
            key = poly.denominator_vector(nuf)
            if key not in out:
                out[key] = poly
            elif out[key] != poly:
                raise NotAClusterVariableDVector(
                    f"two distinct variables share the d-vector {key}")
    return out


# -- principal coefficients ----------------------------------------------------


def principal_quiver(q: Quiver) -> Quiver:
    """Extend by one frozen vertex per mutable vertex, with an arrow from the
    new vertex n+i down to i."""
    n = q.n
    arrows = list(q.arrows) + [(n + i, i) for i in q.vertices]
    return Quiver(2 * n, tuple(arrows), frozenset(range(n + 1, 2 * n + 1)))


def variable_mutation_sequence(q: Quiver, a) -> list[int]:
    """Mutation sequence reaching the cluster variable with 0-1 denominator
    vector a: flip the crossed diagonals in crossing order along the
    realizing arc."""
    from .geometry import build_pipelines  # local import to avoid a cycle

    a = tuple(a)
    sets = build_pipelines(q, a)
    if len(sets.pipelines) != 1:
        raise NotAClusterVariableDVector(f"{a} decomposes into several variables")
    return [diag for diag, _ in sets.pipelines[0].crossings]


def cluster_variable(q: Quiver, a) -> LaurentPoly:
    """The cluster variable with denominator vector a: an initial variable
    for minus a unit vector, otherwise computed by a targeted mutation
    sequence along the realizing arc."""
    a = tuple(a)
    units = {tuple(-1 if i == j else 0 for i in range(q.n)): j + 1 for j in range(q.n)}
    if a in units:
        return LaurentPoly.variable(units[a])
    if any(x not in (0, 1) for x in a):
        raise NotAClusterVariableDVector(f"{a} is not a variable denominator vector")
    seq = variable_mutation_sequence(q, a)
    seed = mutate_seed_sequence(initial_seed(q), seq)
    poly = seed.entry(seq[-1])
    if poly.denominator_vector(len(q.unfrozen)) != a:
        raise NotAClusterVariableDVector(f"mutation walk missed the target {a}")
    return poly


def principal_lift(q: Quiver, a) -> LaurentPoly:
    """The corresponding cluster variable with principal coefficients (over
    2n variables; setting the top n to 1 recovers the plain variable)."""
    a = tuple(a)
    units = {tuple(-1 if i == j else 0 for i in range(q.n)): j + 1 for j in range(q.n)}
    if a in units:
        return LaurentPoly.variable(units[a])
    if any(x not in (0, 1) for x in a):
        raise NotAClusterVariableDVector(f"{a} is not a variable denominator vector")
    seq = variable_mutation_sequence(q, a)
    seed = mutate_seed_sequence(initial_seed(principal_quiver(q)), seq)
    poly = seed.entry(seq[-1])
    check = poly.substitute_one(range(q.n + 1, 2 * q.n + 1))
    if check != cluster_variable(q, a):
        raise NotAClusterVariableDVector("principal lift does not specialize correctly")
    return poly


def g_vector_by_multidegree(poly: LaurentPoly, b_matrix: list[list[int]]) -> tuple[int, ...]:
    """Common multidegree of a principal-coefficient variable under
    deg(x_i) = e_i and deg(x_{n+i}) = minus the i-th column of the exchange
    matrix.  Disagreeing terms raise NotHomogeneous."""
    n = len(b_matrix)
    g = None
    for m in poly.terms:
        deg = [0] * n
        for v, e in m:
            if v <= n:
                deg[v - 1] += e
            else:
                col = v - n - 1
                for r in range(n):
                    deg[r] -= e * b_matrix[r][col]
        deg = tuple(deg)
        if g is None:
            g = deg
        elif g != deg:
            raise NotHomogeneous(f"terms have degrees {g} and {deg}")
    if g is None:
        raise NotHomogeneous("zero polynomial has no multidegree")
    return g


def g_vector_by_formula(qtilde: Quiver, linear_vertices) -> tuple[int, ...]:
    """Degree formula for the g-vector of the variable indexed by a linear
    full subquiver: on a path vertex, incoming-from-path arrows minus one;
    off the path, 1 exactly when the vertex only receives one arrow from the
    path and sends none back."""
    vs = set(linear_vertices)
    if path_order(qtilde, vs) is None:
        raise NotLinearSubquiver(f"{sorted(vs)} does not induce a path")
    arrow_set = qtilde.arrows
    g = []
    for r in qtilde.vertices:
        deg_in = sum(1 for t, h in arrow_set if h == r and t in vs)
        deg_out = sum(1 for t, h in arrow_set if t == r and h in vs)
        if r in vs:
            g.append(deg_in - 1)
        elif (deg_out, deg_in) == (0, 1):
            g.append(1)
        else:
            g.append(0)
    return tuple(g)


def b_matrix(q: Quiver) -> list[list[int]]:
    return exchange_matrix(q)
