"""Known misprints and false statements, each with an executable witness.

Every entry pairs the statement as printed with the form this package
adopts.  ``witness()`` recomputes both and returns the evidence; an
entry is *confirmed* when the printed form fails and the adopted form
holds.  Entries of kind ``"false-claim"`` have no adopted repair: the
witness only demonstrates the failure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
from gmpy2 import mpq

from . import identities as ident
from .families import (
    bridge,
    closed_forms,
    det_as_sum,
    gen_umemura,
    gen_umemura_det,
    noou_U,
    toda_T,
    toda_substitution,
)
from .painleve import (
    BValues,
    NumericConfig,
    PVIParams,
    evi_residual,
    h_functions,
    pvi_params,
    pvi_residual,
    q_m_stack,
)
from .ring import A, B, B1, B2, V, W, Z, substitute, to_text

KINDS = ("typo", "convention", "false-claim")


@dataclass(frozen=True)
class Erratum:
    id: str
    subject: str
    printed: str
    adopted: str
    kind: str
    witness: Callable[[], dict]

    def evaluate(self) -> dict:
        w = self.witness()
        if self.kind == "false-claim":
            confirmed = not w["printed_holds"]
        else:
            confirmed = (not w["printed_holds"]) and w["adopted_holds"]
        return {
            "id": self.id,
            "subject": self.subject,
            "kind": self.kind,
            "printed": self.printed,
            "adopted": self.adopted,
            "confirmed": confirmed,
            "witness": w,
        }


def _s(x) -> str:
    return mpmath.nstr(x, 5) if isinstance(x, mpmath.mpf) else str(x)


_T = Fraction(4, 3)
_B1, _B2 = Fraction(1, 3), Fraction(1, 5)


def _numeric_tol():
    return NumericConfig().tol


# -- witnesses -----------------------------------------------------------


def _toda_t2() -> dict:
    value = toda_T(2)
    forced = (B1 * B1 * -2 - B2 * B2 * 2 + (B1 * B1 - B2 * B2) * V) * mpq(1, 4) + mpq(1, 4)
    printed = forced.scale(2)
    target = substitute(noou_U(2), toda_substitution())
    return {
        "recurrence_value": to_text(value),
        "printed_holds": printed == value and printed.scale(4) == target,
        "adopted_holds": forced == value and forced.scale(4) == target,
        "ratio_printed_to_recurrence": "2",
    }


def _evi_square() -> dict:
    h = h_functions("h_nm", 0, 1, _B1, _B2, _T)
    b = BValues(_B1, _B2, Fraction(3, 2), Fraction(0))
    with mpmath.workdps(50):
        sq = abs(evi_residual(h, b, _T, squared=True))
        plain = abs(evi_residual(h, b, _T, squared=False))
    tol = _numeric_tol()
    return {"point": {"n": 0, "m": 1, "b1": str(_B1), "b2": str(_B2), "t": str(_T)},
            "residual_squared": _s(sq), "residual_unsquared": _s(plain),
            "printed_holds": plain < tol, "adopted_holds": sq < tol}


def _h0_root() -> dict:
    b = BValues(_B1, _B2, Fraction(3, 2), Fraction(0))
    out = {}
    with mpmath.workdps(50):
        for variant in ("standard", "sqrt_plus"):
            h = h_functions("h_nm", 0, 1, _B1, _B2, _T, h0_variant=variant)
            out[variant] = abs(evi_residual(h, b, _T))
    tol = _numeric_tol()
    return {"residual_sqrt_t_minus_1": _s(out["standard"]), "residual_sqrt_t_plus_1": _s(out["sqrt_plus"]),
            "printed_holds": out["sqrt_plus"] < tol, "adopted_holds": out["standard"] < tol}


def _identity(case_id, params, variant, mode=None) -> bool:
    case = ident.IdentityCase(case_id, params, mode or ident.Mode(), variant)
    return ident.verify(case).passed


def _remark2() -> dict:
    return {"params": [0, 1], "pattern": ident.remark2_pattern(0, 1),
            "printed_holds": _identity("REM2", (0, 1), "printed"),
            "adopted_holds": _identity("REM2", (0, 1), "reflected")}


def _lemma1() -> dict:
    n, m, k = 1, 0, 0
    d = gen_umemura_det(n, m, k)
    g = gen_umemura(n, m, k)
    swapped = substitute(g, {"a": B, "b": A})
    return {"params": [n, m, k],
            "det_equals_sum": d == g, "det_equals_swapped_sum": d == swapped,
            "printed_holds": d == g,
            "adopted_holds": all(gen_umemura_det(a, b, c) == det_as_sum(a, b, c)
                                 for a in range(4) for b in range(3) for c in range(a + 1))}


def _eq44_anchor() -> dict:
    lhs = substitute(gen_umemura(0, 2), {"b": A})
    printed = (A + 1) ** 2 * (A + 9) * (Z + W) ** 3 * (Z - W) ** 3
    return {"params": [0, 2],
            "printed_holds": lhs == printed,
            "adopted_holds": lhs == closed_forms("EQ44", 0, 2, corrected=True),
            "ratio": "-1" if lhs == -printed else "other"}


def _thm1() -> dict:
    return {"params": [1, 1],
            "printed_holds": _identity("THM1", (1, 1), "printed"),
            "adopted_holds": _identity("THM1", (1, 1), "reflected")}


def _gauge() -> dict:
    mode = ident.Mode("rational_point", 5)
    return {"params": [1, 1, 1],
            "printed_holds": ident.verify_hirota_miwa(1, 1, 1, mode=mode, gauge="printed").passed,
            "adopted_holds": ident.verify_hirota_miwa(1, 1, 1, mode=mode, gauge="hirota").passed}


def _prop6() -> dict:
    rep = ident.verify_prop6(2)
    readings = rep.witness["readings"]
    return {"params": [2], "readings": readings,
            "printed_holds": readings["family:stated"] or readings["umemura:stated"]}


def _pvi_map() -> dict:
    m = 1
    s = Fraction(2 * m + 1, 2)
    b = BValues(_B1, _B2, s, Fraction(0))
    t = Fraction(3, 2)
    with mpmath.workdps(50):
        q = q_m_stack(m, _B1, _B2, t)
        good = pvi_params(b, "hamiltonian")
        flipped = PVIParams(good.alpha, -good.beta, good.gamma, good.delta)
        res = {
            "hamiltonian": abs(pvi_residual(q, good, t)),
            "printed_delta": abs(pvi_residual(q, pvi_params(b, "printed"), t)),
            "printed_beta_sign": abs(pvi_residual(q, flipped, t)),
        }
    tol = _numeric_tol()
    return {"m": m, "t": str(t), "residuals": {k: _s(v) for k, v in res.items()},
            "printed_holds": res["printed_delta"] < tol or res["printed_beta_sign"] < tol,
            "adopted_holds": res["hamiltonian"] < tol}


def _lemma6() -> dict:
    return {"printed_holds": ident.lemma6_check(5, "exponent")[0],
            "adopted_holds": ident.lemma6_check(5, "factor")[0]}


def _lemma4() -> dict:
    ok, w = ident.lemma4_check(5)
    return {"printed_holds": ok, "counterexamples": w.get("counterexamples", 0), "first": w.get("first")}


def _bridge_sign() -> dict:
    ms = range(1, 5)
    return {"m": list(ms),
            "printed_holds": all(gen_umemura(0, m) == substitute(noou_U(m + 1), {"z": Z * Z, "w": W * W})
                                 for m in ms),
            "adopted_holds": all(gen_umemura(0, m) == bridge(noou_U(m + 1)) for m in ms)}


ERRATA: tuple[Erratum, ...] = (
    Erratum("TODA_T2", "second Toda polynomial display", "twice the recurrence value",
            "value forced by the recurrence from T_0 = T_1 = 1", "typo", _toda_t2),
    Erratum("EVI_SQUARE", "sigma form of the sixth Painleve equation",
            "second bracket unsquared", "second bracket squared", "typo", _evi_square),
    Erratum("H0_ROOT", "seed Hamiltonian h0", "sqrt(t+1) in the b2 term",
            "sqrt(t-1) in both terms", "typo", _h0_root),
    Erratum("REM2_SIGN", "index-lowering relation between k and k+1 families",
            "prefactor prod (i+j)/(i-j)", "reflected prefactor prod (i+j)/(j-i)", "convention", _remark2),
    Erratum("LEMMA1_SWAP", "determinant form of the generalized family",
            "determinant equals the subset sum", "equal after a<->b and a per-term sign",
            "convention", _lemma1),
    Erratum("EQ44_SIGN", "factorization on the diagonal a = b",
            "(z+w)^3 (z-w)^3 anchor for U_{0,2}", "(w-z) in the second factor", "false-claim", _eq44_anchor),
    Erratum("THM1_CONVENTION", "bilinear relation between neighbouring k",
            "printed prefactor for k > 0", "reflected prefactor", "convention", _thm1),
    Erratum("LADDER_GAUGE", "gauge factor of the Hirota-Miwa lattice function",
            "T = U X", "T = U / X", "typo", _gauge),
    Erratum("PROP6_SIGN", "ladder relation at b1 = 0", "stated sign",
            "holds only with the right side negated under the family reading", "false-claim", _prop6),
    Erratum("PVI_MAP", "parameters of the sixth Painleve equation",
            "-beta t/q^2 and delta = -(b3-b4)(b3+b4-2)/2",
            "+beta t/q^2 and delta = -(b3+b4)(b3+b4+2)/2", "typo", _pvi_map),
    Erratum("LEMMA6_SIGN", "reflection of split coefficients", "(-1)^A with A = +-1",
            "the sign A itself", "typo", _lemma6),
    Erratum("LEMMA4_ONLY_IF", "vanishing criterion for b_lambda", "if and only if",
            "'only if' fails when lambda = 2 lies in both sets", "false-claim", _lemma4),
    Erratum("BRIDGE_SIGN", "Umemura to ladder change of variables", "z -> z^2",
            "z -> -z^2", "convention", _bridge_sign),
)


def ledger() -> list[dict]:
    return [e.evaluate() for e in ERRATA]


def to_json(entries: list[dict] | None = None) -> str:
    return json.dumps(entries if entries is not None else ledger(), indent=1, sort_keys=True)


def main() -> int:
    print(to_json())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
