"""Command-line front end.  Every command prints one canonical JSON report.

Exit status: 0 on success, 1 on a domain error, 2 on a usage or parse error.
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .errors import DomainError, ParseError
from .io import (
    emit_error,
    emit_report,
    load_input,
    parse_category,
    parse_channel,
    parse_complex_matrix,
    parse_fp,
    parse_morphism,
    parse_rational,
    parse_real,
)


class UsageError(Exception):
    name = "UsageError"

    def to_json(self) -> dict:
        return {"error": self.name, "message": str(self), "detail": {}}


def _rationals(text: str, loc: str) -> list[Fraction]:
    return [parse_rational(x.strip(), f"{loc}[{i}]") for i, x in enumerate(text.split(",")) if x.strip()]


def _category(source: str):
    if source.startswith("builtin:"):
        return parse_category({"builtin": source.split(":", 1)[1]}, "--category")
    return parse_category(load_input(source), "--category")


# commands ---------------------------------------------------------------------

def cmd_validate(args) -> dict:
    data = load_input(args.input)
    if not isinstance(data, dict) or "type" not in data:
        raise ParseError("input needs a \"type\" field", location="$.type")
    kind = data["type"]
    if kind == "finite-probability":
        p = parse_fp(data)
        return {"type": kind, "valid": True, "size": len(p), "support": list(p.support)}
    if kind == "stochastic-morphism":
        s = parse_morphism(data)
        return {"type": kind, "valid": True, "shape": list(s.shape)}
    if kind == "density-matrix":
        from .quantum import validate_density

        body = {k: v for k, v in data.items() if k != "type"}
        if set(body) != {"matrix"}:
            raise ParseError("a density matrix has exactly the field \"matrix\"", location="$")
        dm = validate_density(parse_complex_matrix(body["matrix"], "$.matrix"), args.tol)
        return {"type": kind, "valid": True, "eigenvalues": dm.eigenvalues, "hermitization": dm.hermitization}
    if kind == "channel":
        from .quantum import channel_roundtrip

        ch = channel_roundtrip(parse_channel(data), tol=args.tol)
        return {"type": kind, "valid": True, "dims": [ch.din, ch.dout], "kraus_rank": len(ch.kraus),
                "choi_eigenvalues": ch.choi_eigenvalues()}
    if kind == "hamiltonian":
        from .gapped import validate_gapped

        if set(data) != {"type", "matrix", "gap"}:
            raise ParseError("a hamiltonian has the fields \"matrix\" and \"gap\"", location="$")
        h = validate_gapped(parse_complex_matrix(data["matrix"], "$.matrix"), parse_real(data["gap"], "$.gap"),
                            args.tol)
        return {"type": kind, "valid": True, "spectrum": h.spectrum}
    if kind == "category":
        c = parse_category(data)
        return {"type": kind, "valid": True, "objects": len(c.objects), "morphisms": len(c.morphisms)}
    if kind == "cubical-complex":
        from .cubical import import_complex, validate_cubical

        body = {k: v for k, v in data.items() if k != "type"}
        k = validate_cubical(import_complex(body))
        return {"type": kind, "valid": True, "sizes": list(k.sizes)}
    raise ParseError(f"unknown input type {kind!r}", location="$.type")


def cmd_loss(args) -> dict:
    from .finprob import compose, validate
    from .infoloss import loss_fp

    data = load_input(args.pipeline)
    if not isinstance(data, dict) or set(data) - {"source", "steps", "type"} or not {"source", "steps"} <= set(data):
        raise ParseError("a pipeline has the fields \"source\" and \"steps\"", location="$")
    src = parse_fp(data["source"], "$.source")
    steps = data["steps"]
    if not isinstance(steps, list) or not steps:
        raise ParseError("steps must be a nonempty list", location="$.steps")
    from .io import _fields, parse_rational_matrix

    morphisms, cur = [], src
    for i, st in enumerate(steps):
        st = _fields(st, f"$.steps[{i}]", {"target", "matrix"})
        tgt = parse_fp(st["target"], f"$.steps[{i}].target")
        morphisms.append(validate(parse_rational_matrix(st["matrix"], f"$.steps[{i}].matrix"), cur, tgt))
        cur = tgt
    losses = [loss_fp(s, args.scale) for s in morphisms]
    total = math.fsum(losses)
    comp = morphisms[0]
    for s in morphisms[1:]:
        comp = compose(s, comp)
    composite = loss_fp(comp, args.scale)
    return {"steps": [{"index": i, "loss": v} for i, v in enumerate(losses)], "total": total,
            "composite_loss": composite, "additivity_residual": abs(total - composite),
            "units": "nats", "scale": args.scale}


def cmd_coproduct(args) -> dict:
    from .finprob import compose, coproduct_morphisms, coproduct_objects, injections

    data = load_input(args.input)
    if not isinstance(data, dict):
        raise ParseError("expected an object", location="$")
    keys = set(data) - {"type"}
    if keys == {"left", "right"}:
        p, p2 = parse_fp(data["left"], "$.left"), parse_fp(data["right"], "$.right")
        i1, i2 = injections(p, p2)
        obj = coproduct_objects(p, p2)
        return {"object": {"labels": list(obj.labels), "probs": list(obj.probs)},
                "inj1": i1.matrix, "inj2": i2.matrix}
    if keys == {"f", "g"}:
        f, g = parse_morphism(data["f"], "$.f"), parse_morphism(data["g"], "$.g")
        cp = coproduct_morphisms(f, g)
        zero = [k for k, s in enumerate(f.target.probs) if s == 0]
        return {"object": {"labels": list(cp.obj.labels), "probs": list(cp.obj.probs)},
                "copair": cp.copair.matrix, "zero_target_indices": zero,
                "copair_is_stochastic": cp.copair.is_column_stochastic,
                "restricts_to_f": compose(cp.copair, cp.inj1).matrix == f.matrix,
                "restricts_to_g": compose(cp.copair, cp.inj2).matrix == g.matrix}
    raise ParseError("give either left/right objects or f/g morphisms", location="$")


def cmd_nerve(args) -> dict:
    from .cubical import cubical_nerve, degenerate_mask, euler_report

    k = cubical_nerve(_category(args.category), args.nmax, args.bound)
    rep = euler_report(k)
    return {"n_max": args.nmax, "sizes": list(k.sizes),
            "nondegenerate": [sum(1 for d in degenerate_mask(k, n) if not d) for n in range(k.top_dim + 1)],
            "euler": rep}


def cmd_summing(args) -> dict:
    from .probcat import PointedSet
    from .summing import ClassicalSummingFunctor, verify_summing

    x = PointedSet(args.size)
    phi = ClassicalSummingFunctor(x, tuple(_rationals(args.lam, "--lambda")))
    out = {"lambda": list(phi.lam)}
    if args.subset is not None:
        a = [int(v) for v in args.subset.split(",") if v.strip()]
        obj = phi.evaluate(a)
        out["value"] = {"weights": obj.weights, "labels": obj.labels, "sizes": [s.size for s in obj.sets]}
    else:
        out["table"] = [{"subset": sorted(a), "weights": o.weights, "labels": o.labels}
                        for a, o in phi.table().items()]
    out["verify"] = verify_summing(phi.table(), x)
    return out


def _descriptor(args):
    from .probcat import PointedSet

    if args.kind == "classical":
        from .summing import classical_realization_descriptor

        return classical_realization_descriptor(PointedSet(args.n + 1))
    if args.kind == "quantum":
        from .quantum import quantum_strata_descriptor

        return quantum_strata_descriptor(args.n)
    from .gapped import gapped_realization_descriptor

    if args.beta is None or args.delta is None:
        raise UsageError("the gapped descriptor needs --beta and --delta")
    return gapped_realization_descriptor(args.n, args.beta, args.delta)


def _samples(args):
    out = []
    for i, s in enumerate(args.sample or []):
        if args.kind == "gapped":
            out.append([parse_real(v.strip(), f"--sample[{i}]") for v in s.split(",")])
        else:
            out.append(_rationals(s, f"--sample[{i}]"))
    return out


def cmd_strata(args) -> dict:
    d = _descriptor(args)
    return d.to_json(_samples(args))


def cmd_gap_locus(args) -> dict:
    from .gapped import BETA_DELTA_STAR, T_STAR, gap_locus

    out = gap_locus(args.beta, args.delta).to_json()
    out["threshold"] = {"t": T_STAR, "beta_delta": BETA_DELTA_STAR}
    return out


def cmd_gap_check(args) -> dict:
    from .gapped import gibbs, is_gap_preserving, validate_gapped
    from .io import _fields

    data = _fields(load_input(args.input), "$", {"channel", "hamiltonian", "hamiltonian2", "beta", "delta"}, {"type"})
    ch = parse_channel(data["channel"], "$.channel")
    beta, delta = parse_real(data["beta"], "$.beta"), parse_real(data["delta"], "$.delta")
    h = validate_gapped(parse_complex_matrix(data["hamiltonian"], "$.hamiltonian"), delta, args.tol)
    h2 = validate_gapped(parse_complex_matrix(data["hamiltonian2"], "$.hamiltonian2"), delta, args.tol)
    ch.check(args.tol)
    ok = is_gap_preserving(ch, h, h2, beta, tol=args.tol)
    return {"gap_preserving": ok, "beta": beta, "delta": delta,
            "gibbs_source": gibbs(h, beta).entries, "gibbs_target": gibbs(h2, beta).entries,
            "image": ch.apply(gibbs(h, beta).entries)}


def cmd_axiom_suite(args) -> dict:
    from .infoloss import axiom_suite, entropy_squared_difference, shannon_difference

    loss = shannon_difference() if args.loss == "shannon" else entropy_squared_difference()
    reports = axiom_suite(loss, args.instances, args.seed, args.tol)
    return {"loss": loss.name, "seed": args.seed, "instances": args.instances, "tolerance": args.tol,
            "axioms": reports, "pass": all(r.passed for r in reports)}


def cmd_export(args) -> dict:
    import json

    if args.what == "nerve":
        from .cubical import cubical_nerve, export_complex

        if args.category is None:
            raise UsageError("export nerve needs --category")
        content = export_complex(cubical_nerve(_category(args.category), args.nmax, args.bound))
    else:
        if args.kind is None or args.n is None:
            raise UsageError("export descriptor needs --kind and --n")
        content = _descriptor(args).to_json(_samples(args))
    if args.output:
        from .io import to_jsonable

        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(to_jsonable(content), fh, sort_keys=True, indent=2, ensure_ascii=False)
            fh.write("\n")
        return {"written": args.output, "what": args.what}
    return {"what": args.what, "content": content}


COMMANDS = {
    "validate": cmd_validate, "loss": cmd_loss, "coproduct": cmd_coproduct, "nerve": cmd_nerve,
    "summing": cmd_summing, "strata": cmd_strata, "gap-locus": cmd_gap_locus, "gap-check": cmd_gap_check,
    "axiom-suite": cmd_axiom_suite, "export": cmd_export,
}


def build_parser() -> argparse.ArgumentParser:
    from .cubical import DEFAULT_BOUND

    p = argparse.ArgumentParser(prog="probgamma", description="Probabilistic Gamma-space toolkit")
    p.add_argument("--version", action="version", version=f"probgamma {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="validate a typed JSON value")
    s.add_argument("--input", required=True, help="JSON file or inline JSON")
    s.add_argument("--tol", type=float, default=1e-9)

    s = sub.add_parser("loss", help="Shannon loss along a chain of stochastic morphisms")
    s.add_argument("--pipeline", required=True)
    s.add_argument("--scale", type=float, default=1.0)

    s = sub.add_parser("coproduct", help="coproduct object or copair of two morphisms")
    s.add_argument("--input", required=True)

    s = sub.add_parser("nerve", help="cubical nerve of a finite category")
    s.add_argument("--category", required=True, help="JSON category or builtin:NAME")
    s.add_argument("--nmax", type=int, default=2)
    s.add_argument("--bound", type=int, default=DEFAULT_BOUND)

    s = sub.add_parser("summing", help="classical summing functor table and check")
    s.add_argument("--size", type=int, required=True, help="#X including the basepoint")
    s.add_argument("--lambda", dest="lam", required=True, help="comma-separated rationals")
    s.add_argument("--subset", help="comma-separated points of A")

    for name in ("strata", "export"):
        s = sub.add_parser(name, help="realization descriptor" if name == "strata" else "write cell complex or descriptor")
        if name == "export":
            s.add_argument("--what", choices=("nerve", "descriptor"), required=True)
            s.add_argument("--category")
            s.add_argument("--nmax", type=int, default=2)
            s.add_argument("--bound", type=int, default=DEFAULT_BOUND)
            s.add_argument("--output")
        s.add_argument("--kind", choices=("classical", "quantum", "gapped"), required=name == "strata")
        s.add_argument("--n", type=int, required=name == "strata")
        s.add_argument("--beta", type=float)
        s.add_argument("--delta", type=float)
        s.add_argument("--sample", action="append", help="comma-separated parameter point; repeatable")

    s = sub.add_parser("gap-locus", help="feasibility locus for given beta and delta")
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)

    s = sub.add_parser("gap-check", help="is a channel gap preserving between two Hamiltonians")
    s.add_argument("--input", required=True)
    s.add_argument("--tol", type=float, default=1e-9)

    s = sub.add_parser("axiom-suite", help="information-loss axioms on seeded random instances")
    s.add_argument("--loss", choices=("shannon", "entropy-squared"), default="shannon")
    s.add_argument("--instances", type=int, default=500)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--tol", type=float, default=1e-12)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except ParseError as err:
        print(emit_error(args.command, err))
        return 2
    except DomainError as err:
        print(emit_error(args.command, err))
        return 1
    except (UsageError, ValueError) as err:
        print(emit_error(args.command, err if isinstance(err, UsageError) else UsageError(str(err))))
        return 2
    print(emit_report(args.command, result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
