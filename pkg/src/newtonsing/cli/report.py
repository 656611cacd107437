"""JSON report documents.  Rationals are always written as "num/den" strings."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Optional

from ..errors import NewtonSingError
from ..homog import HeightData, is_adapted
from ..newton import NewtonData, Weight, newton_polyhedron
from ..normalform import SingularityReport, adapted_shear
from ..oscint.decay import DecayFit, gamma_condition_report, predicted_gamma
from ..poly import Jet, Polynomial

SCHEMA = 1


def rat(x) -> Optional[str]:
    if x is None:
        return None
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def unrat(s) -> Optional[Fraction]:
    return None if s is None else Fraction(s)


def encode_polynomial(p: Polynomial) -> dict:
    return {"text": str(p), "terms": [[a, b, rat(c)] for (a, b), c in sorted(p.items())]}


def decode_polynomial(d: dict) -> Polynomial:
    return Polynomial({(a, b): Fraction(c) for a, b, c in d["terms"]})


def encode_jet(j: Optional[Jet]) -> Optional[dict]:
    if j is None:
        return None
    out = encode_polynomial(j.poly)
    out.update(order=j.order, truncated=j.truncated)
    return out


def encode_weight(w: Optional[Weight]) -> Optional[dict]:
    if w is None:
        return None
    k1, k2 = w.oriented()
    return {"kappa1": rat(k1), "kappa2": rat(k2)}


def encode_newton(nd: NewtonData) -> dict:
    return {
        "vertices": [list(v) for v in nd.vertices],
        "compact_edges": [[list(a), list(b)] for a, b in nd.compact_edges],
        "horizontal_ray": nd.has_horizontal_ray,
        "vertical_ray": nd.has_vertical_ray,
        "distance": rat(nd.distance),
        "principal_face": {"kind": nd.principal_face.kind, "points": [list(p) for p in nd.principal_face.points]},
        "principal_weight": encode_weight(nd.principal_weight),
    }


def encode_height(hd: HeightData) -> dict:
    return {"n_P": hd.n_P, "d_h": rat(hd.d_h), "h": rat(hd.h), "adapted": hd.adapted,
            "reason": hd.reason, "distance": rat(hd.distance), "non_integer_ratio": hd.non_integer_ratio}


def encode_report(r: SingularityReport) -> dict:
    return {
        "type": r.type_label,
        "family": r.family,
        "hessian_rank": r.rank,
        "jet_order": r.jet_order,
        "normalized": encode_polynomial(r.normalized),
        "linear_map": [[rat(c) for c in row] for row in r.linear_map],
        "kappa": encode_weight(r.kappa),
        "kappa_adapted": encode_weight(r.kappa_adapted),
        "d": rat(r.d),
        "h": rat(r.h),
        "n": r.n,
        "m": r.m_display,
        "m_status": r.m_status,
        "psi": encode_jet(r.psi),
        "adapted": r.adapted_input,
        "input_coordinates_adapted": r.input_coordinates_adapted,
        "p_c": rat(r.p_c),
        "p_c_applicability": r.p_c_applicability,
        "reason": r.reason,
        "cubic_multiplicity": r.cubic_multiplicity,
    }


def encode_fit(f: DecayFit) -> dict:
    return {
        "direction": [repr(float(v)) for v in f.direction],
        "lambdas": [repr(float(v)) for v in f.lambdas],
        "values": [repr(float(v)) for v in f.values],
        "gamma_hat": repr(float(f.gamma_hat)),
        "r2": repr(float(f.r2)),
        "gamma_predicted": rat(f.gamma_predicted),
        "tolerance": repr(float(f.tolerance)),
        "critical_point": None if f.critical_point is None else [repr(float(v)) for v in f.critical_point],
        "verdict": f.verdict,
        "note": f.note,
    }


@dataclass
class ReportDocument:
    input: str
    classification: Optional[dict] = None
    newton: Optional[dict] = None
    newton_adapted: Optional[dict] = None
    height: Optional[dict] = None
    gamma: Optional[dict] = None
    warnings: list = field(default_factory=list)
    error: Optional[dict] = None
    exit_code: int = 0
    schema: int = SCHEMA

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ReportDocument":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls.from_dict(json.loads(text))


def gamma_section(report: SingularityReport, fit: Optional[DecayFit] = None) -> dict:
    g = predicted_gamma(report)
    out: dict[str, Any] = {"predicted": rat(g), "condition": None, "fit": None}
    if g is not None and report.d is not None:
        ok, margin = gamma_condition_report(report, g)
        out["condition"] = {"holds": ok, "margin": rat(margin)}
    if fit is not None:
        out["fit"] = encode_fit(fit)
    return out


def build_document(text: str, p: Polynomial, report: SingularityReport) -> ReportDocument:
    nd = newton_polyhedron(p)
    doc = ReportDocument(input=text)
    doc.classification = encode_report(report)
    doc.newton = encode_newton(nd)
    try:
        doc.height = encode_height(is_adapted(p, nd))
    except NewtonSingError as exc:  # keep the classification even without height data
        doc.warnings.append(f"height data unavailable: {exc}")
    if report.family in ("A", "D"):
        _, nd_a = adapted_shear(report, check=False)
        doc.newton_adapted = encode_newton(nd_a)
    doc.gamma = gamma_section(report)
    doc.warnings.extend(report.warnings)
    doc.exit_code = 2 if report.family == "out-of-scope" else 0
    return doc
