"""Stable homotopy: m -> 1 reduction, the decision procedure and certificates.

A certificate is a list of steps acting on a pair of homomorphisms (left,
right).  Every step adds the same finite-dimensional stabilizer to both sides
and may replace one side by a homotopic homomorphism:

``M_TO_1``
    the side is m-standard; adding its cut-point evaluations lets the cells be
    stretched into one 1-standard homomorphism (one ``TRICK`` per cut point).
``DIAGRAM_CORRECTION``
    with ``P`` the padding diagram, the side receives ``eta0`` (1-standard,
    diagram ``c P + lambda_e``) while the other receives ``eta``
    (finite-dimensional, diagram ``c P``); ``eta0`` retracts onto ``eta``.
``DIRECT_SUM``
    both sides receive the same finite-dimensional homomorphism.
``SAME_DIAGRAM``
    final step: both sides are 1-standard with equal diagrams; after adding the
    stabilizer they are conjugate by a unitary homotopic to 1.

Only the integer side conditions are checked.  The unitaries and explicit
paths behind each step are supplied by the corresponding lemmas; the gluing
lemma is stated for minimal presentations and minimality is not verified.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .algebra import AlgebraPresentation, validate as validate_algebra
from .diagram import (
    DiagramPair,
    KKClass,
    KKPresentation,
    check_diagram,
    diagram_group,
    kk_class,
    kk_sub,
    m_membership,
    unit_diagram,
)
from .hom import (
    AnyHom,
    InvalidHom,
    MStandardHom,
    NotRealizable,
    StandardHom,
    as_standard,
    concatenate_cells,
    correction_pair,
    cut_traces,
    direct_sum,
    empty_hom,
    fibre_hom,
    identity_hom,
    induced_diagram,
    padding_diagram,
    minimal_padding,
    point_evaluation_stabilizer,
    realize_diagram,
    validate_any,
    validate_standard,
)
from .zlinalg import IntMatrix

LEMMAS = ("M_TO_1", "SAME_DIAGRAM", "DIAGRAM_CORRECTION", "DIRECT_SUM", "TRICK")


class MalformedCertificate(ValueError):
    """A certificate step does not have the expected shape."""


class LTooSmall(NotRealizable):
    """The Property (H) complement diagram is not realizable at this ``L``."""


@dataclass(frozen=True)
class Step:
    lemma: str
    side: Optional[str] = None
    params: dict = field(default_factory=dict)
    stabilizer: Optional[StandardHom] = None
    replacement: Optional[StandardHom] = None
    pre: tuple = (None, None)
    post: tuple = (None, None)


@dataclass(frozen=True)
class HomotopyCertificate:
    kind: str  # "stable_homotopy" or "reduction"
    steps: tuple[Step, ...]
    stabilizer: StandardHom


@dataclass(frozen=True)
class Decision:
    verdict: bool
    kk_difference: KKClass
    stabilizer: Optional[StandardHom] = None
    certificate: Optional[HomotopyCertificate] = None


def _diagram(A, B, h) -> Optional[DiagramPair]:
    return None if h is None else induced_diagram(A, B, h)


def _flatten_m1(h: AnyHom) -> AnyHom:
    # no interval blocks means no cut points: the data is already 1-standard
    if isinstance(h, MStandardHom) and (h.m == 1 or not h.cells):
        return as_standard(h)
    return h


def _m_to_1_step(A, B, psi: MStandardHom, side: str, other: Optional[AnyHom]):
    eta = point_evaluation_stabilizer(A, B, psi)
    rho = concatenate_cells(A, B, psi, eta)
    validate_standard(A, B, rho)
    cuts = cut_traces(psi)
    cut_points = [str(Fraction(s, psi.m)) for s in range(1, psi.m)]
    tricks = [{"lemma": "TRICK", "t0": t0, "fibres": [list(f) for f in fibres]}
              for t0, fibres in zip(cut_points, cuts)]
    pre_self, pre_other = _diagram(A, B, psi), _diagram(A, B, other)
    new_other = None if other is None else direct_sum(other, eta)
    post_self, post_other = _diagram(A, B, rho), _diagram(A, B, new_other)
    if side == "left":
        pre, post = (pre_self, pre_other), (post_self, post_other)
    else:
        pre, post = (pre_other, pre_self), (post_other, post_self)
    step = Step("M_TO_1", side, {"m": psi.m, "cut_points": cut_points, "tricks": tricks},
                stabilizer=eta, replacement=rho, pre=pre, post=post)
    return step, eta, rho, new_other


def reduce_to_1_standard(A: AlgebraPresentation, B: AlgebraPresentation,
                         psi: AnyHom) -> tuple[StandardHom, StandardHom, HomotopyCertificate]:
    """``(eta, rho, cert)`` with ``psi + eta`` homotopic to the 1-standard ``rho``."""
    validate_any(A, B, psi)
    psi = _flatten_m1(psi)
    if isinstance(psi, StandardHom):
        return empty_hom(A, B), psi, HomotopyCertificate("reduction", (), empty_hom(A, B))
    step, eta, rho, _ = _m_to_1_step(A, B, psi, "left", None)
    if induced_diagram(A, B, rho) != induced_diagram(A, B, psi) + induced_diagram(A, B, eta):
        raise ArithmeticError("reduction changed the diagram")
    return eta, rho, HomotopyCertificate("reduction", (step,), eta)


def decide_stable_homotopy(A: AlgebraPresentation, B: AlgebraPresentation, h1: AnyHom, h2: AnyHom,
                           P: Optional[KKPresentation] = None) -> Decision:
    validate_any(A, B, h1)
    validate_any(A, B, h2)
    P = P or diagram_group(A, B)
    c1 = kk_class(P, induced_diagram(A, B, h1))
    c2 = kk_class(P, induced_diagram(A, B, h2))
    diff = kk_sub(P, c1, c2)
    if c1 != c2:
        return Decision(False, diff)

    left, right = _flatten_m1(h1), _flatten_m1(h2)
    steps: list[Step] = []
    total = empty_hom(A, B)

    if isinstance(left, MStandardHom):
        step, eta, left, right = _m_to_1_step(A, B, left, "left", right)
        steps.append(step)
        total = direct_sum(total, eta)
    if isinstance(right, MStandardHom):
        step, eta, right, left = _m_to_1_step(A, B, right, "right", left)
        steps.append(step)
        total = direct_sum(total, eta)

    dl, dr = induced_diagram(A, B, left), induced_diagram(A, B, right)
    mu = m_membership(A, B, dr - dl)
    if mu is None:
        raise ArithmeticError("equal KK classes but no membership witness")
    for ip in range(B.p):
        for j in range(A.l):
            coeff = mu[ip, j]
            if not coeff:
                continue
            sign = 1 if coeff > 0 else -1
            c, eta, eta0 = correction_pair(A, B, ip, j, sign)
            for _ in range(abs(coeff)):
                pre = (induced_diagram(A, B, left), induced_diagram(A, B, right))
                left = direct_sum(left, eta0)
                right = direct_sum(right, eta)
                post = (induced_diagram(A, B, left), induced_diagram(A, B, right))
                steps.append(Step("DIAGRAM_CORRECTION", "left",
                                  {"unit": [ip + 1, j + 1], "sign": sign, "c": c},
                                  stabilizer=eta, replacement=eta0, pre=pre, post=post))
                total = direct_sum(total, eta)

    zeta = fibre_hom(A, B, (1,) * A.p)
    pre = (induced_diagram(A, B, left), induced_diagram(A, B, right))
    if pre[0] != pre[1]:
        raise ArithmeticError("diagram correction did not equalize the diagrams")
    left, right = direct_sum(left, zeta), direct_sum(right, zeta)
    post = (induced_diagram(A, B, left), induced_diagram(A, B, right))
    steps.append(Step("SAME_DIAGRAM", None, {}, stabilizer=zeta, pre=pre, post=post))
    total = direct_sum(total, zeta)

    cert = HomotopyCertificate("stable_homotopy", tuple(steps), total)
    ok, reason = explain_certificate(A, B, h1, h2, cert)
    if not ok:
        raise ArithmeticError(f"generated certificate failed verification: {reason}")
    return Decision(True, diff, total, cert)


# verification ------------------------------------------------------------------

class _Fail(Exception):
    pass


def _require(cond: bool, msg: str):
    if not cond:
        raise _Fail(msg)


def _checked_hom(A, B, h, what: str, allow_empty: bool = False):
    if not isinstance(h, (StandardHom, MStandardHom)):
        raise MalformedCertificate(f"{what} is missing")
    try:
        validate_any(A, B, h, allow_empty=allow_empty)
    except InvalidHom as e:
        raise _Fail(f"{what} invalid: {e}") from None
    return h


def _checked_fd(A, B, h, what: str) -> StandardHom:
    _checked_hom(A, B, h, what)
    _require(isinstance(h, StandardHom) and h.is_finite_dimensional(),
             f"{what} must have finite-dimensional image")
    return h


def _check_m_to_1(A, B, step: Step, me: AnyHom) -> StandardHom:
    _require(isinstance(me, MStandardHom), "M_TO_1 applied to a side that is not m-standard")
    p = step.params
    try:
        m = int(p["m"])
        cut_points = [Fraction(x) for x in p["cut_points"]]
        tricks = list(p["tricks"])
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedCertificate(f"M_TO_1 parameters: {e}") from None
    _require(m == me.m, f"M_TO_1 declares m={m} but the side has m={me.m}")
    _require(cut_points == [Fraction(s, m) for s in range(1, m)], "cut points are not s/m")
    _require(len(tricks) == m - 1, "one TRICK per cut point required")
    tau = [0] * A.p
    for s, tr in enumerate(tricks):
        try:
            _require(tr["lemma"] == "TRICK" and Fraction(tr["t0"]) == cut_points[s], "TRICK at wrong point")
            fibres = [tuple(int(x) for x in f) for f in tr["fibres"]]
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedCertificate(f"TRICK entry: {e}") from None
        _require(len(fibres) == B.l, "TRICK fibres must list every interval block")
        for jp, f in enumerate(fibres):
            _require(f == tuple(me.cells[jp][s].right) == tuple(me.cells[jp][s + 1].left),
                     f"TRICK fibre at {cut_points[s]} does not match block {jp + 1}")
            tau = [a + b for a, b in zip(tau, f)]
    eta = _checked_fd(A, B, step.stabilizer, "M_TO_1 stabilizer")
    _require(eta == fibre_hom(A, B, tau), "M_TO_1 stabilizer is not the sum of the cut-point evaluations")
    rho = _checked_hom(A, B, step.replacement, "M_TO_1 result")
    _require(isinstance(rho, StandardHom), "M_TO_1 result must be 1-standard")
    for jp, row in enumerate(me.cells):
        nplus = [sum(c.nplus[j] for c in row) for j in range(A.l)]
        nminus = [sum(c.nminus[j] for c in row) for j in range(A.l)]
        _require(list(rho.blocks[jp].nplus) == nplus and list(rho.blocks[jp].nminus) == nminus,
                 f"M_TO_1 result does not carry the stretched traversals on block {jp + 1}")
    _require(rho.r == me.r + eta.r, "M_TO_1 result has the wrong amplification")
    _require(induced_diagram(A, B, rho) == induced_diagram(A, B, me) + induced_diagram(A, B, eta),
             "M_TO_1 result diagram is not d(psi) + d(eta)")
    return eta


def explain_certificate(A: AlgebraPresentation, B: AlgebraPresentation, h1: AnyHom,
                        h2: Optional[AnyHom], cert: HomotopyCertificate) -> tuple[bool, str]:
    """Replay ``cert``; ``(True, "ok")`` or ``(False, reason)``.

    ``h2`` is ``None`` for a reduction certificate.
    """
    if not isinstance(cert, HomotopyCertificate):
        raise MalformedCertificate("not a certificate")
    if cert.kind not in ("stable_homotopy", "reduction"):
        raise MalformedCertificate(f"unknown certificate kind {cert.kind!r}")
    try:
        validate_algebra(A)
        validate_algebra(B)
        state = {"left": _flatten_m1(_checked_hom(A, B, h1, "left homomorphism"))}
        state["right"] = (None if cert.kind == "reduction"
                          else _flatten_m1(_checked_hom(A, B, h2, "right homomorphism")))
        added = empty_hom(A, B)
        for n, step in enumerate(cert.steps):
            if not isinstance(step, Step) or step.lemma not in LEMMAS or step.lemma == "TRICK":
                raise MalformedCertificate(f"step {n + 1}: unknown lemma tag")
            where = f"step {n + 1} ({step.lemma})"
            now = (_diagram(A, B, state["left"]), _diagram(A, B, state["right"]))
            _require(tuple(step.pre) == now, f"{where}: recorded pre diagrams differ")
            if step.lemma in ("M_TO_1", "DIAGRAM_CORRECTION"):
                if step.side not in ("left", "right"):
                    raise MalformedCertificate(f"{where}: side must be 'left' or 'right'")
                other_side = "right" if step.side == "left" else "left"
            if cert.kind == "reduction":
                _require(step.lemma == "M_TO_1" and step.side == "left",
                         f"{where}: a reduction certificate only holds M_TO_1 steps")
            if step.lemma == "M_TO_1":
                eta = _check_m_to_1(A, B, step, state[step.side])
                state[step.side] = step.replacement
                if state[other_side] is not None:
                    state[other_side] = direct_sum(state[other_side], eta)
            elif step.lemma == "DIAGRAM_CORRECTION":
                me, other = state[step.side], state[other_side]
                _require(isinstance(me, StandardHom) and isinstance(other, StandardHom),
                         f"{where}: both sides must be 1-standard")
                try:
                    ip, j = (int(x) - 1 for x in step.params["unit"])
                    sign, c = int(step.params["sign"]), int(step.params["c"])
                except (KeyError, TypeError, ValueError) as e:
                    raise MalformedCertificate(f"{where}: {e}") from None
                _require(0 <= ip < B.p and 0 <= j < A.l, f"{where}: matrix unit out of range")
                _require(sign in (1, -1) and c >= 1, f"{where}: sign must be +-1 and c >= 1")
                eta = _checked_fd(A, B, step.stabilizer, f"{where} stabilizer")
                eta0 = _checked_hom(A, B, step.replacement, f"{where} replacement")
                _require(isinstance(eta0, StandardHom), f"{where}: replacement must be 1-standard")
                kap = padding_diagram(A, B).scale(c)
                _require(induced_diagram(A, B, eta) == kap, f"{where}: stabilizer diagram is not c times the padding diagram")
                _require(induced_diagram(A, B, eta0) == kap + unit_diagram(A, B, ip, j).scale(sign),
                         f"{where}: replacement diagram is not c times the padding diagram plus a unit relation")
                state[step.side] = direct_sum(me, eta0)
                state[other_side] = direct_sum(other, eta)
            elif step.lemma == "DIRECT_SUM":
                eta = _checked_fd(A, B, step.stabilizer, f"{where} stabilizer")
                for s in ("left", "right"):
                    if state[s] is not None:
                        state[s] = direct_sum(state[s], eta)
            else:  # SAME_DIAGRAM
                _require(n == len(cert.steps) - 1, f"{where}: must be the final step")
                L, R = state["left"], state["right"]
                _require(isinstance(L, StandardHom) and isinstance(R, StandardHom),
                         f"{where}: both sides must be 1-standard")
                _require(induced_diagram(A, B, L) == induced_diagram(A, B, R),
                         f"{where}: diagrams differ")
                eta = _checked_fd(A, B, step.stabilizer, f"{where} stabilizer")
                state["left"], state["right"] = direct_sum(L, eta), direct_sum(R, eta)
            added = direct_sum(added, eta)
            now = (_diagram(A, B, state["left"]), _diagram(A, B, state["right"]))
            _require(tuple(step.post) == now, f"{where}: recorded post diagrams differ")
        if cert.kind == "stable_homotopy":
            _require(bool(cert.steps) and cert.steps[-1].lemma == "SAME_DIAGRAM",
                     "certificate must end with SAME_DIAGRAM")
        else:
            _require(isinstance(state["left"], StandardHom), "reduction does not end 1-standard")
        _require(cert.stabilizer == added, "declared stabilizer is not the sum of the step stabilizers")
        _require(cert.stabilizer.is_finite_dimensional(), "stabilizer must have finite-dimensional image")
    except _Fail as e:
        return False, str(e)
    return True, "ok"


def verify_certificate(A: AlgebraPresentation, B: AlgebraPresentation, h1: AnyHom, h2: AnyHom,
                       cert: HomotopyCertificate) -> bool:
    return explain_certificate(A, B, h1, h2, cert)[0]


# Property (H) ---------------------------------------------------------------------

@dataclass(frozen=True)
class PropertyHWitness:
    L: int
    phi_diagram: DiagramPair
    phi_hom: StandardHom
    psi_hom: StandardHom
    check: bool
    decision: Optional[Decision] = None


def complement_diagram(A: AlgebraPresentation, L: int) -> DiagramPair:
    """``(L k 1^T - I_p, -I_l)``."""
    lam0 = IntMatrix(A.p, A.p, tuple(L * A.k[i] - int(i == j) for i in range(A.p) for j in range(A.p)))
    return DiagramPair(lam0, -IntMatrix.identity(A.l))


def property_h_witness(A: AlgebraPresentation, L: int, decide: bool = True) -> PropertyHWitness:
    validate_algebra(A)
    lam_p = complement_diagram(A, L)
    if not check_diagram(A, A, lam_p):
        raise ArithmeticError("complement diagram does not commute")
    try:
        if L < 1:
            raise NotRealizable(f"L = {L} gives negative multiplicities")
        phi = realize_diagram(A, A, lam_p, 0, allow_empty=True)
    except NotRealizable as e:
        bound = minimal_padding(A, A, complement_diagram(A, 0), allow_empty=True)
        err = LTooSmall(f"L = {L} is too small; L = {max(bound, 1)} suffices ({e})",
                        most_negative=e.most_negative, needed_c=max(bound, 1))
        raise err from None
    ident = identity_hom(A)
    lam = induced_diagram(A, A, ident)
    psi = realize_diagram(A, A, lam + lam_p, 0)
    if not psi.is_finite_dimensional():
        raise ArithmeticError("sum diagram realized with traversals")
    P = diagram_group(A, A)
    lhs = direct_sum(ident, phi)
    check = kk_class(P, induced_diagram(A, A, lhs)) == kk_class(P, induced_diagram(A, A, psi))
    decision = decide_stable_homotopy(A, A, lhs, psi, P) if decide else None
    return PropertyHWitness(L, lam_p, phi, psi, check, decision)
