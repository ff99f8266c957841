"""Closed form vs quadrature checks for the decoherence functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .spectral import Lorentzian, Ohmic, QuadratureError, oracle_quadrature

OHMIC_S = (0.5, 1.0, 2.0, 3.0)
OHMIC_ETA = (0.5, 1.0, 5.0)
OHMIC_TIMES = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
OHMIC_RTOL = 1e-6
LORENTZ_RTOL = 1e-3


@dataclass(frozen=True)
class OracleCase:
    label: str
    max_rel_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_rel_error < self.tolerance


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


def ohmic_oracle_cases(
    s_values: Sequence[float] = OHMIC_S,
    eta_values: Sequence[float] = OHMIC_ETA,
    times: Sequence[float] = OHMIC_TIMES,
    omega_c: float = 1.0,
    tolerance: float = OHMIC_RTOL,
) -> list[OracleCase]:
    """One case per (s, eta, kernel); error is the max over ``times``."""
    cases = []
    for s in s_values:
        for eta in eta_values:
            bath = Ohmic(eta, s, omega_c)
            for kernel, closed in (("gr_kernel", bath.g_real), ("psi_kernel", bath.psi)):
                err = max(_rel(closed(t), oracle_quadrature(bath, kernel, t)) for t in times)
                name = "g_real" if kernel == "gr_kernel" else "psi"
                cases.append(OracleCase(f"ohmic s={s:g} eta={eta:g} {name}", err, tolerance))
    return cases


@dataclass
class LorentzianAudit:
    """Max relative errors of candidate closed forms against both quadrature domains.

    ``errors[(form, quantity, domain)]`` is a float, or None when the
    quadrature diverges on that domain.
    """

    errors: dict = field(default_factory=dict)
    tolerance: float = LORENTZ_RTOL

    def matches(self, form: str, domain: str) -> bool:
        vals = [self.errors.get((form, q, domain)) for q in ("g_real", "psi")]
        return all(v is not None and v < self.tolerance for v in vals)

    def matching_domains(self, form: str) -> list[str]:
        return [d for d in ("half", "full") if self.matches(form, d)]

    def lines(self) -> Iterable[str]:
        for (form, q, dom), v in sorted(self.errors.items()):
            shown = "diverges" if v is None else f"{v:.3e}"
            yield f"lorentzian {form:8s} {q:6s} vs [{dom}] quadrature: max rel err {shown}"


def lorentzian_audit(
    gamma: float = 10.0,
    lam: float = 1.0,
    deltas: Sequence[float] = (1.0, 5.0),
    times: Sequence[float] = tuple(np.linspace(0.1, 10.0, 34)),
    tolerance: float = LORENTZ_RTOL,
) -> LorentzianAudit:
    """Compare the printed (exponent-sign corrected) and fully damped closed forms."""
    audit = LorentzianAudit(tolerance=tolerance)
    for delta in deltas:
        bath = Lorentzian(gamma, lam, delta)
        g_pr, p_pr = bath.printed_forms(np.asarray(times))
        forms = {
            "printed": (g_pr, p_pr),
            "closed": (bath.g_real(np.asarray(times)), bath.psi(np.asarray(times))),
        }
        for dom in ("half", "full"):
            quad = {}
            for q, kernel in (("g_real", "gr_kernel"), ("psi", "psi_kernel")):
                try:
                    quad[q] = np.array([oracle_quadrature(bath, kernel, t, domain=dom) for t in times])
                except QuadratureError:
                    quad[q] = None
            for form, (g, p) in forms.items():
                for q, vals in (("g_real", g), ("psi", p)):
                    key = (form, q, dom)
                    if quad[q] is None:
                        audit.errors[key] = None
                        continue
                    err = float(np.max(np.abs(vals - quad[q]) / np.abs(quad[q])))
                    prev = audit.errors.get(key, 0.0)
                    audit.errors[key] = None if prev is None else max(prev, err)
    return audit
