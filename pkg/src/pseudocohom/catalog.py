"""Standard small examples used by the tests and shipped as model files."""

from __future__ import annotations

from . import hopf as hopf_mod
from .nonabelian import NonAbelianCocycle
from .pseudoalg import (
    LiePseudoalgebra,
    PolyMap,
    current_pseudoalgebra,
    from_lambda_bracket,
    skew_complete,
)
from .scalars import QQ, ScalarField
from .tensor import FreeModule, parse_tensor, reindex

SL2_CONSTANTS = {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}}
AFF1_CONSTANTS = {("a", "b"): {"b": 1}}


def abelian(name, basis, hopf) -> LiePseudoalgebra:
    return LiePseudoalgebra.abelian(FreeModule(name, basis, hopf))


def _table(src, target, entries: dict, n=2, skew=False):
    parsed = {
        tuple(src[k].index(b) for k, b in enumerate(key.split())): parse_tensor(text, target, n)
        for key, text in entries.items()
    }
    if skew:
        return skew_complete(src[0], target, parsed, n)
    return PolyMap(src, target, parsed)


def heisenberg_data(field: ScalarField = QQ):
    """L abelian on x1, x2; M abelian on z; chi(x1, x2) = (1 | 1) z, psi = 0."""
    H = hopf_mod.trivial(field)
    L = abelian("L", ["x1", "x2"], H)
    M = abelian("M", ["z"], H)
    chi = _table((L.module, L.module), M.module, {"x1 x2": "(1 | 1) z"}, skew=True)
    psi = PolyMap((L.module, M.module), M.module, {})
    return L, M, NonAbelianCocycle(chi, psi)


def sl2(field: ScalarField = QQ, hopf=None) -> LiePseudoalgebra:
    return current_pseudoalgebra(["e", "f", "h"], SL2_CONSTANTS, hopf or hopf_mod.trivial(field), "sl2")


def virasoro(field: ScalarField = QQ, name="Vir", basis=("L",)) -> LiePseudoalgebra:
    """[L lambda L] = (d + 2 lambda) L over k[d]."""
    H = hopf_mod.polynomial(field, ["d"])
    module = FreeModule(name, list(basis), H)
    return LiePseudoalgebra(module, from_lambda_bracket(module, {(0, 0): {(0, 1, 0): 1, (1, 0, 0): 2}}), name)


def z2(field: ScalarField = QQ):
    return hopf_mod.cyclic_group(field, 2, ["g0", "g1"])


def cur_sl2_z2(field: ScalarField = QQ, basis=("e", "f", "h"), name="Cur") -> LiePseudoalgebra:
    constants = {}
    rename = dict(zip(("e", "f", "h"), basis))
    for (a, b), row in SL2_CONSTANTS.items():
        constants[(rename[a], rename[b])] = {rename[k]: v for k, v in row.items()}
    return current_pseudoalgebra(list(basis), constants, z2(field), name)


def aff1(field: ScalarField = QQ, hopf=None) -> LiePseudoalgebra:
    return current_pseudoalgebra(["a", "b"], AFF1_CONSTANTS, hopf or hopf_mod.trivial(field), "M")


def aff1_semidirect_data(field: ScalarField = QQ, corrupted: bool = False):
    """L abelian on t acting on aff(1) = <a, b | [a, b] = b> by ad_a; chi = 0.

    ``corrupted`` swaps in the action t.a = a, t.b = 0, which is not a derivation.
    """
    H = hopf_mod.trivial(field)
    L = abelian("L", ["t"], H)
    M = aff1(field, H)
    entries = {"t a": "(1 | 1) a"} if corrupted else {"t b": "(1 | 1) b"}
    psi = _table((L.module, M.module), M.module, entries)
    chi = PolyMap((L.module, L.module), M.module, {}, skew=True)
    return L, M, NonAbelianCocycle(chi, psi)


def mc_failure_data(field: ScalarField = QQ):
    """chi(x1, x2) = b, x1 acting by ad_a, x2 acting trivially: the action identity fails at (x1, x2, a)."""
    H = hopf_mod.trivial(field)
    L = abelian("L", ["x1", "x2"], H)
    M = aff1(field, H)
    chi = _table((L.module, L.module), M.module, {"x1 x2": "(1 | 1) b"}, skew=True)
    psi = _table((L.module, M.module), M.module, {"x1 b": "(1 | 1) b"})
    return L, M, NonAbelianCocycle(chi, psi)


def adjoint_semidirect(L: LiePseudoalgebra, M: LiePseudoalgebra):
    """L acting on a renamed copy M of itself by the adjoint action, chi = 0."""
    mapping = list(range(M.module.rank))
    table = {}
    for key, T in L.bracket.table.items():
        table[key] = reindex(T, M.module, mapping)
    psi = PolyMap((L.module, M.module), M.module, table)
    chi = PolyMap((L.module, L.module), M.module, {}, skew=True)
    return NonAbelianCocycle(chi, psi)


def virasoro_semidirect(field: ScalarField = QQ):
    L = virasoro(field)
    M = LiePseudoalgebra(
        FreeModule("W", ["W"], L.hopf),
        from_lambda_bracket(FreeModule("W", ["W"], L.hopf), {(0, 0): {(0, 1, 0): 1, (1, 0, 0): 2}}),
        "W",
    )
    return L, M, adjoint_semidirect(L, M)


def cur_semidirect(field: ScalarField = QQ):
    L = cur_sl2_z2(field)
    M = current_pseudoalgebra(
        ["E", "F", "K"],
        {("E", "F"): {"K": 1}, ("K", "E"): {"E": 2}, ("K", "F"): {"F": -2}},
        L.hopf,
        "N",
    )
    return L, M, adjoint_semidirect(L, M)
