"""JSON form of program trees.

Chains are stored as DSL text and elements as element text relative to the
chain they live in, so a serialized program is readable on its own.
"""
from __future__ import annotations

import json

from ..chains import Interval
from ..dsl import format_chain, format_element, parse_chain, parse_element
from . import programs as P
from .ladder import LadderFold, LadderSection


def _c(e):
    return format_chain(e)


def _el(e, x):
    return None if x is None else format_element(e, x)


def _interval(e, iv: Interval) -> dict:
    return {"lo": _el(e, iv.lo), "lo_closed": iv.lo_closed,
            "hi": _el(e, iv.hi), "hi_closed": iv.hi_closed}


def _parse_el(e, s):
    return None if s is None else parse_element(e, s)


def program_to_json(p: P.EndoProgram) -> dict:
    d = {"op": p.op}
    if isinstance(p, P.Identity):
        d["chain"] = _c(p.chain)
    elif isinstance(p, P.Const):
        d.update(source=_c(p.source), target=_c(p.target), value=_el(p.target, p.value))
    elif isinstance(p, P.TableMap):
        d.update(source=_c(p.source), target=_c(p.target),
                 values=[_el(p.target, v) for v in p.values])
    elif isinstance(p, (P.SuccNat, P.PredClampNat)):
        pass
    elif isinstance(p, P.StepThreshold):
        d.update(source=_c(p.source), target=_c(p.target), pivot=_el(p.source, p.pivot),
                 low=_el(p.target, p.low), high=_el(p.target, p.high))
    elif isinstance(p, P.StepMap):
        d.update(source=_c(p.source), target=_c(p.target),
                 cuts=[_el(p.source, c) for c in p.cuts],
                 values=[_el(p.target, v) for v in p.values], strict=p.strict)
    elif isinstance(p, P.CollapseToPoint):
        d.update(source=_c(p.source), region=_interval(p.source, p.region),
                 point=_el(p.source, p.point))
    elif isinstance(p, P.Compose):
        d["steps"] = [program_to_json(s) for s in p.steps]
    elif isinstance(p, P.Power):
        d.update(inner=program_to_json(p.inner), k=p.k)
    elif isinstance(p, P.GuardedCompose):
        d.update(guard=_el(p.source, p.guard), inner=program_to_json(p.inner),
                 default=_el(p.target, p.default))
    elif isinstance(p, P.SumPiece):
        d.update(source=_c(p.source), target=_c(p.target),
                 left=program_to_json(p.left), right=program_to_json(p.right))
    elif isinstance(p, P.Inject):
        d.update(target=_c(p.target), side=p.side)
    elif isinstance(p, P.ExtendIdentity):
        d.update(source=_c(p.source), inner=program_to_json(p.inner))
    elif isinstance(p, P.PairConst):
        d.update(source=_c(p.source), right=_c(p.right), value=_el(p.right, p.value))
    elif isinstance(p, P.ProjectFirst):
        d["source"] = _c(p.source)
    elif isinstance(p, P.OnFactor):
        d.update(source=_c(p.source), inner=program_to_json(p.inner), which=p.which)
    elif isinstance(p, P.PrefixQuotient):
        d.update(beta=program_to_json(p.beta), z=_el(p.source, p.z), k=p.k)
    elif isinstance(p, P.CantorIso):
        d.update(first=_c(p.first), second=_c(p.second), direction=p.direction)
    elif isinstance(p, P.Transport):
        d.update(source=_c(p.source), inner=program_to_json(p.inner), reverse=p.reverse)
    elif isinstance(p, P.Regroup):
        d.update(chain=_c(p.chain), k=p.k, inverse=p.inverse)
    elif isinstance(p, P.LeftInverseChoice):
        d.update(beta=program_to_json(p.beta), avoid=_el(p.target, p.avoid))
    elif isinstance(p, P.RightInverseFromImage):
        d["alpha"] = program_to_json(p.alpha)
    elif isinstance(p, (LadderFold, LadderSection)):
        d["chain"] = _c(p.Y)
    else:
        raise P.ProgramError(f"cannot serialize {type(p).__name__}")
    return d


def program_from_json(d) -> P.EndoProgram:
    if isinstance(d, str):
        d = json.loads(d)
    op = d.get("op")
    if op not in P._REGISTRY:
        raise P.ProgramError(f"unknown program op {op!r}")
    chain = lambda key: parse_chain(d[key])  # noqa: E731
    sub = lambda key: program_from_json(d[key])  # noqa: E731
    if op == "identity":
        return P.Identity(chain("chain"))
    if op == "const":
        t = chain("target")
        return P.Const(chain("source"), t, parse_element(t, d["value"]))
    if op == "table":
        t = chain("target")
        return P.TableMap(chain("source"), t, tuple(parse_element(t, v) for v in d["values"]))
    if op == "succ":
        return P.SuccNat()
    if op == "pred_clamp":
        return P.PredClampNat()
    if op == "step":
        s, t = chain("source"), chain("target")
        return P.StepThreshold(s, t, parse_element(s, d["pivot"]),
                               parse_element(t, d["low"]), parse_element(t, d["high"]))
    if op == "step_map":
        s, t = chain("source"), chain("target")
        return P.StepMap(s, t, tuple(parse_element(s, c) for c in d["cuts"]),
                         tuple(parse_element(t, v) for v in d["values"]), d.get("strict", False))
    if op == "collapse":
        s = chain("source")
        r = d["region"]
        region = Interval(_parse_el(s, r["lo"]), r["lo_closed"], _parse_el(s, r["hi"]), r["hi_closed"])
        return P.CollapseToPoint(s, region, parse_element(s, d["point"]))
    if op == "compose":
        return P.Compose(*(program_from_json(s) for s in d["steps"]))
    if op == "power":
        return P.Power(sub("inner"), d["k"])
    if op == "guarded":
        inner = sub("inner")
        return P.GuardedCompose(parse_element(inner.source, d["guard"]), inner,
                                parse_element(inner.target, d["default"]))
    if op == "sum_piece":
        return P.SumPiece(chain("source"), chain("target"), sub("left"), sub("right"))
    if op == "inject":
        return P.Inject(chain("target"), d["side"])
    if op == "extend_identity":
        return P.ExtendIdentity(chain("source"), sub("inner"))
    if op == "pair_const":
        r = chain("right")
        return P.PairConst(chain("source"), r, parse_element(r, d["value"]))
    if op == "project_first":
        return P.ProjectFirst(chain("source"))
    if op == "on_factor":
        return P.OnFactor(chain("source"), sub("inner"), d["which"])
    if op == "prefix_quotient":
        beta = sub("beta")
        return P.PrefixQuotient(beta, parse_element(beta.source, d["z"]), d["k"])
    if op == "cantor":
        return P.CantorIso(chain("first"), chain("second"), d["direction"])
    if op == "transport":
        return P.Transport(chain("source"), sub("inner"), d["reverse"])
    if op == "regroup":
        return P.Regroup(chain("chain"), d["k"], d["inverse"])
    if op == "left_inverse_choice":
        beta = sub("beta")
        return P.LeftInverseChoice(beta, _parse_el(beta.source, d.get("avoid")))
    if op == "right_inverse_from_image":
        return P.RightInverseFromImage(sub("alpha"))
    if op == "ladder_fold":
        return LadderFold(chain("chain"))
    if op == "ladder_section":
        return LadderSection(chain("chain"))
    raise P.ProgramError(f"unknown program op {op!r}")
