"""The subsystems of p-power and p'-index, the reduction pipeline and factorization."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, InputError, InternalError
from .fusion import (FusionSystem, check_saturation, fusion_from_group, generated_system,
                     hyperfocal, is_strongly_closed, op_core_F, opprime_aut, oppower_aut)
from .fusionops import (Embedding, centralizer_subsystem, equal_under, internal_product_generators,
                        quotient_system, restrict_system, same_system, sub_lattice)
from .perm import Perm
from .permgrp import PermGroup, op_power_residual
from .plattice import direct_factorizations


def _restrict_local(F: FusionSystem, g: np.ndarray, P: int):
    """Local perm of ``g|_P`` when ``g(P) = P``, else ``None``."""
    img = g[F.elems[P]]
    loc = F.loc[P][img]
    if (loc < 0).any():
        return None
    return Perm(map(int, loc))


def _transported_gens(F: FusionSystem, P: int, H: PermGroup) -> list:
    return [(P, F.gmap_of_local(P, a)) for a in H.gens]


def aut0_S(F: FusionSystem) -> PermGroup:
    """Elements of ``Aut_F(S)`` whose restriction to some centric ``P`` lies in ``O^{p'}(Aut_F(P))``."""
    top = F.L.top
    A = F.aut(top)
    centric = [P for info in F.f_classes() if info.centric for P in info.members]
    res = {P: opprime_aut(F, P) for P in centric}
    keep = []
    H = PermGroup(A.degree, [])
    for row in A.elements():
        a = Perm(map(int, row))
        if H.contains(a):
            continue
        g = F.gmap_of_local(top, a)
        for P in centric:
            r = _restrict_local(F, g, P)
            if r is not None and res[P].contains(r):
                keep.append(a)
                H = PermGroup(A.degree, keep)
                break
    return H


def _index_prime_to_p(F0: FusionSystem, F: FusionSystem) -> bool:
    for info in F.f_classes():
        for P in info.members:
            need = opprime_aut(F, P)
            have = F0.aut(P)
            if not all(have.contains(g) for g in need.gens):
                return False
    return True


def opprime_subsystem(F: FusionSystem, name: str = "") -> tuple[FusionSystem, int]:
    """``(O^{p'}(F), |Out_{F0}(S)|)`` by closure and verification."""
    gens = []
    for info in F.f_classes():
        for P in info.members:
            gens += _transported_gens(F, P, opprime_aut(F, P))
    top = F.L.top
    gens += _transported_gens(F, top, aut0_S(F))
    F0 = generated_system(F.L, gens, name=name)
    if not check_saturation(F0, stop_early=True).saturated:
        raise InternalError("closure of the O^{p'} generators is not saturated")
    if not _index_prime_to_p(F0, F):
        raise InternalError("closure does not contain O^{p'}(Aut_F(P)) everywhere")
    gamma = F0.aut_order(top) // F0.inn_order(top)
    return F0, gamma


def oppower_subsystem(F: FusionSystem, name: str = "") -> tuple[FusionSystem, Embedding]:
    """``O^p(F)`` over ``hyp(F)``, with the embedding of its lattice into ``F``'s."""
    L = F.L
    T = hyperfocal(F)
    E = sub_lattice(L, T)
    gens = []
    for P in L.subgroups_of(T):
        P = int(P)
        H = oppower_aut(F, P)
        for a in H.gens:
            gens.append((E.node_down(P), E.gmap_down(F.gmap_of_local(P, a))))
    F0 = generated_system(E.L0, gens, name=name)
    if not check_saturation(F0, stop_early=True).saturated:
        raise InternalError("closure of the O^p generators is not saturated")
    # p-power index: contains O^p(Aut_F(P)) for every P <= hyp(F)
    for P in L.subgroups_of(T):
        P = int(P)
        P0 = E.node_down(P)
        have = F0.aut(P0)
        for a in oppower_aut(F, P).gens:
            if not have.contains(_restrict_local(F0, E.gmap_down(F.gmap_of_local(P, a)), P0)):
                raise InternalError("closure misses part of O^p(Aut_F(P))")
    return F0, E


def oppower_group_check(F: FusionSystem, F0: FusionSystem, E: Embedding) -> bool:
    """Compare ``O^p(F)`` with the system of ``O^p(G)`` over ``S`` meet ``O^p(G)``."""
    if F.G is None:
        raise InputError("system is not realized by a group")
    H = op_power_residual(F.G, F.p)
    keep = [i for i in range(F.S.n) if H.contains(F.S.perms[i])]
    node = F.L.id_of(F.S.table.closure(keep))
    if node != E.node_up(E.L0.top):
        return False
    if node == F.L.bottom:
        return F0.S.n == 1
    FH = fusion_from_group(H, F.p, sylow=F.L.perm_group(node))
    return same_system(F0, FH)


# ---------------------------------------------------------------- reducedness

@dataclass
class ReducedReport:
    op_trivial: bool
    oppower_equal: bool
    opprime_equal: bool
    trivial_system: bool = False

    @property
    def reduced(self) -> bool:
        return (not self.trivial_system and self.op_trivial
                and self.oppower_equal and self.opprime_equal)

    def __bool__(self):
        return self.reduced

    def as_dict(self) -> dict:
        return {"reduced": self.reduced, "O_p_trivial": self.op_trivial,
                "O^p_equal": self.oppower_equal, "O^p'_equal": self.opprime_equal}


def is_trivial(F: FusionSystem) -> bool:
    return F.S.n == 1


def is_reduced(F: FusionSystem) -> ReducedReport:
    if is_trivial(F):
        return ReducedReport(True, True, True, trivial_system=True)
    op = op_core_F(F) == F.L.bottom
    # O^p(F) = F exactly when the hyperfocal subgroup is all of S
    opp = hyperfocal(F) == F.L.top
    F0, _ = opprime_subsystem(F)
    return ReducedReport(op, opp, same_system(F0, F))


def is_constrained(F: FusionSystem) -> bool:
    return F.is_centric(op_core_F(F))


# ---------------------------------------------------------------- pipeline

@dataclass
class ReductionTrace:
    steps: list = field(default_factory=list)
    result: FusionSystem | None = None
    error: str | None = None

    @property
    def trivial(self) -> bool:
        return self.result is not None and is_trivial(self.result)

    def as_dict(self) -> dict:
        return {"steps": self.steps,
                "result": None if self.result is None else _fp_dict(self.result),
                "trivial": self.trivial, "error": self.error}


def _fp_dict(F: FusionSystem) -> dict:
    order, ncls, items = F.fingerprint()
    return {"order_S": str(order), "classes": ncls,
            "class_data": [[k, str(o), str(a), list(fl)] for k, o, a, fl in items]}


def centralizer_quotient(F: FusionSystem) -> FusionSystem:
    """``C_F(Q)/Z(Q)`` for ``Q = O_p(F)``."""
    Q = op_core_F(F)
    if Q == F.L.bottom:
        return F
    C, E = centralizer_subsystem(F, Q)
    T = F.S.table
    Z = F.L.id_of(T.center(F.L.nodes[Q].mask))
    qd = quotient_system(C, E.node_down(Z))
    return qd.system


def _changed(a: FusionSystem, b: FusionSystem) -> bool:
    if a.S.n != b.S.n:
        return True
    return a.fingerprint() != b.fingerprint() or not same_system(a, b)


def reduce(F: FusionSystem, opprime_first: bool = False, max_rounds: int = 64) -> ReductionTrace:
    """The reduction of ``F``; ``opprime_first`` swaps the alternation (comparison probe only)."""
    tr = ReductionTrace()
    try:
        cur = centralizer_quotient(F)
        tr.steps.append({"op": "op-core-centralizer-quotient", "before": _fp_dict(F), "after": _fp_dict(cur)})
        _require_op_trivial(cur)
        ops = ["O^p'", "O^p"] if opprime_first else ["O^p", "O^p'"]
        stable = 0
        i = 0
        while stable < 2 and not is_trivial(cur):
            if i >= max_rounds:
                raise InternalError("reduction did not stabilize")
            op = ops[i % 2]
            if op == "O^p":
                new, _ = oppower_subsystem(cur)
            else:
                new, _ = opprime_subsystem(cur)
            tr.steps.append({"op": op, "before": _fp_dict(cur), "after": _fp_dict(new)})
            if _changed(cur, new):
                stable = 0
                _require_op_trivial(new)
            else:
                stable += 1
            cur = new
            i += 1
        if not is_trivial(cur) and not is_reduced(cur).reduced:
            raise InternalError("reduction result is not reduced")
        tr.result = cur
    except CapacityError as e:
        tr.error = f"capacity: {e}"
    return tr


def _require_op_trivial(F: FusionSystem):
    if not is_trivial(F) and op_core_F(F) != F.L.bottom:
        raise InternalError("intermediate system has nontrivial O_p")


# ---------------------------------------------------------------- factorization

@dataclass
class Factorization:
    factors: list  # (node of S, FusionSystem, Embedding)
    nodes: tuple


def factorize(F: FusionSystem, check_reduced: bool = True) -> Factorization:
    """Finest decomposition of a reduced system as a product of subsystems."""
    if check_reduced and not is_reduced(F).reduced:
        raise InputError("factorize requires a reduced fusion system")
    L = F.L
    best = (L.top,)
    for dec in direct_factorizations(L):
        if len(dec) <= len(best):
            continue
        if all(is_strongly_closed(F, d) for d in dec) and _is_product(F, dec):
            best = dec
    factors = []
    for d in best:
        Fi, Ei = restrict_system(F, d)
        factors.append((d, Fi, Ei))
    factors.sort(key=lambda t: (F.L.nodes[t[0]].order, t[1].fingerprint(), t[0]))
    return Factorization(factors, tuple(t[0] for t in factors))


def _is_product(F: FusionSystem, dec) -> bool:
    systems = [restrict_system(F, d) for d in dec]
    gens = internal_product_generators(F, dec, systems)
    return same_system(generated_system(F.L, gens), F)


def is_product_of(F: FusionSystem, factors) -> bool:
    """Whether ``F`` equals the product of ``(F_i, E_i)`` with ``E_i`` embedding into ``F``'s lattice."""
    nodes = [E.node_up(Fi.L.top) for Fi, E in factors]
    gens = internal_product_generators(F, nodes, factors)
    return same_system(generated_system(F.L, gens), F)


__all__ = ["opprime_subsystem", "oppower_subsystem", "oppower_group_check", "aut0_S",
           "is_reduced", "is_constrained", "reduce", "ReductionTrace", "ReducedReport",
           "centralizer_quotient", "factorize", "Factorization", "is_product_of", "equal_under"]
