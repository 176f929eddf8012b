from ..models.approximation import PiecewiseApprox
from ..utils.io import load_model
from .piecewise import fit_piecewise, get_preset, verify_lower_bound


def resolve_approx(spec: str) -> PiecewiseApprox:
    """Turn 'paper-m5', 'fit:<m>,<smin>,<smax>' or 'file:<path>' into an approximation.

    File-loaded approximations are certified on their own range before use.
    """
    kind, _, arg = spec.partition(":")
    if kind == "fit":
        try:
            m, s_min, s_max = arg.split(",")
            m, s_min, s_max = int(m), float(s_min), float(s_max)
        except ValueError as e:
            raise ValueError(f"Invalid approximation '{spec}': {e}") from e
        return fit_piecewise(m, s_min, s_max)
    if kind == "file":
        pw = load_model(PiecewiseApprox, arg)
        report = verify_lower_bound(pw)
        if not report.passed:
            raise ValueError(
                f"Approximation in {arg} is not a lower bound on "
                f"[{pw.s_min:g}, {pw.s_max:g}] (excess {report.max_excess:.3e} "
                f"at s={report.worst_s:.6g})"
            )
        return pw.model_copy(update={"name": pw.name or spec})
    return get_preset(spec)
