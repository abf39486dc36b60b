"""acm-forge command line.

Exit codes: 0 success, 2 precondition or parse error, 3 internal invariant
violation, 4 retry bound exhausted.  Errors print one line to stderr:
``error: <kind>: <reason>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .constructions import (RetryBoundExceeded, kleiman_locus, linear_space_bundle,
                            question_certificate, voisin_build)
from .field import StructuralError
from .groebner import InvariantViolation, buchberger
from .ideals import Ideal
from .invariants import chern_degrees, divisibility_report, hilbert
from .jobspec import JobSpec, parse_job
from .mcm import PreconditionError, acm_certify, h0_twist, mf_extract, split_detect
from .poly import ParseError, format_poly
from .resolution import PresentedModule, minimal_resolution

COMMANDS = ("gb", "resolve", "betti", "acm", "mf", "split", "h0", "hilbert", "c2", "report",
            "voisin", "linspace", "kleiman")


class UsageError(ValueError):
    pass


def _load(path: str | None) -> JobSpec:
    if path is None:
        raise UsageError("this command needs an input file")
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return parse_job(text)


def _need_x(job: JobSpec):
    if job.X is None:
        raise PreconditionError("this command needs a 'hypersurface' line")
    return job.X


def _module(job: JobSpec, seed: int) -> PresentedModule:
    """The module named by the input: explicit presentation, linear space, or ideal."""
    ring = job.X or job.S
    if job.generators is not None:
        return PresentedModule.cokernel(job.module_matrix())
    if job.linear is not None:
        return linear_space_bundle(_need_x(job), job.linear, seed=seed).module
    if job.ideal is not None:
        return PresentedModule.from_ideal(ring, [g for g in job.ideal])
    raise UsageError("input names no module (use generators/relation, linear or ideal)")


def _ideal(job: JobSpec) -> Ideal:
    if job.ideal is None:
        raise UsageError("input has no 'ideal' line")
    return Ideal(job.S, job.ideal)


def _twist_list(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad twist list {text!r}") from None


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _matrix_json(A) -> list[list[str]]:
    return [[format_poly(e) for e in row] for row in A.entries]


def _matrix_text(A) -> str:
    cells = _matrix_json(A)
    if not cells or not cells[0]:
        return "  (empty)"
    width = max(len(c) for row in cells for c in row)
    return "\n".join("  [ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def cmd_gb(job, args):
    gens = list(job.ideal or [])
    if job.hypersurface is not None:
        gens.append(job.hypersurface)
    if not gens:
        raise UsageError("input has no 'ideal' line")
    B = buchberger(gens, job.S, verify=args.verify)
    polys = B.polys()
    text = f"groebner basis ({len(polys)} elements, grevlex)\n" + "".join(
        f"  {format_poly(p)}\n" for p in polys)
    return text, {"basis": [format_poly(p) for p in polys], "order": "grevlex",
                  "field": job.field.descriptor()}


def _resolution(job, args):
    M = _module(job, args.seed)
    return minimal_resolution(M, over=args.over, max_length=args.max_length, verify=args.verify)


def cmd_resolve(job, args):
    res = _resolution(job, args)
    parts = [res.betti.to_text()]
    for i, A in enumerate(res.differentials, start=1):
        parts.append(f"d{i}: {A.shape[0]}x{A.shape[1]}, source twists {list(A.source.twists)}\n"
                     + _matrix_text(A) + "\n")
    data = {"betti": res.betti.to_json(),
            "modules": [list(F.twists) for F in res.modules],
            "differentials": [_matrix_json(A) for A in res.differentials]}
    return "".join(parts), data


def cmd_betti(job, args):
    res = _resolution(job, args)
    return res.betti.to_text(), res.betti.to_json()


def cmd_acm(job, args):
    if job.ideal is not None and job.generators is None and job.linear is None:
        cert = acm_certify(_ideal(job), _need_x(job), seed=args.seed)
    else:
        cert = acm_certify(_module(job, args.seed), job.X, seed=args.seed)
    lines = [f"ACM: {_yes(cert.acm)}", f"pd_S: {cert.pd_s}"]
    if cert.codim is not None:
        lines.append(f"codim: {cert.codim}")
    if cert.locally_free is not None:
        lines.append(f"locally free: {_yes(cert.locally_free)} ({cert.fitting_evidence})")
    lines.append(f"caveat: {cert.caveat}")
    return "\n".join(lines) + "\n" + cert.betti.to_text(), cert.to_json()


def cmd_mf(job, args):
    mf = mf_extract(_module(job, args.seed), job.X)
    text = (f"matrix factorization: size {mf.size}, rank {mf.rank}, d {mf.d}, "
            f"reduced {_yes(mf.reduced)}\nphi:\n{_matrix_text(mf.phi)}\npsi:\n{_matrix_text(mf.psi)}\n")
    return text, mf.to_json()


def cmd_split(job, args):
    rep = split_detect(_module(job, args.seed), job.X)
    data = rep.to_json()
    text = (f"split: {_yes(rep.is_split)}\nline bundle twists: {data['line_bundle_twists']}\n"
            f"core size: {data['core_size']}, core rank: {data['core_rank']}\n")
    return text, data


def cmd_h0(job, args):
    if args.nu is None:
        raise UsageError("h0 needs --nu")
    M = _module(job, args.seed)
    val = h0_twist(M, args.nu)
    return f"h0(M({args.nu})) = {val}\n", {"nu": args.nu, "h0": val}


def cmd_hilbert(job, args):
    if job.ideal is not None and job.generators is None and job.linear is None:
        hd = hilbert(_ideal(job))
    else:
        hd = hilbert(_module(job, args.seed))
    num = " ".join(f"{c:+d}*t^{k}" for k, c in sorted(hd.numerator.items()))
    text = (f"numerator: {num} over (1-t)^{hd.nvars}\nKrull dimension: {hd.krull_dim}\n"
            f"degree: {hd.degree}\nHilbert polynomial: {hd.polynomial_str()}\n")
    return text, hd.to_json()


def cmd_c2(job, args):
    X = _need_x(job)
    M = _module(job, args.seed)
    res = minimal_resolution(M, over="S", verify=args.verify)
    cd = chern_degrees(res.betti, X.degree_of_relation, X.nvars)
    text = (f"rank: {cd.rank}\ndeg c1: {cd.deg_c1}\ndeg c2: {cd.deg_c2}\n"
            f"d divides deg c2: {_yes(cd.c2_divisible)}\n")
    return text, cd.to_json()


def cmd_report(job, args):
    from .constructions import bundle_of_ideal
    X = _need_x(job)
    Y = _ideal(job)
    if job.generators is not None or job.linear is not None:
        E = _module(job, args.seed)
        rep = divisibility_report(Y, E, X.degree_of_relation)
    else:
        E, gens = bundle_of_ideal(Y, X)
        rep = divisibility_report(Y, E, X.degree_of_relation,
                                  free_twists=[-g.degree() for g in gens], shift=0)
    return _report_text(rep), rep.to_json()


def _report_text(rep) -> str:
    return (f"deg Y: {rep.deg_Y} (mod {rep.d}: {rep.res_Y_mod_d})\n"
            f"deg c2(E): {rep.deg_c2} (mod {rep.d}: {rep.res_c2_mod_d})\n"
            f"d | deg Y <=> d | deg c2(E): {'holds' if rep.equivalent else 'FAILS'}\n")


def cmd_voisin(job, args):
    f = job.hypersurface if job is not None else None
    field = job.field if job is not None else None
    V = voisin_build(args.d, f=f, seed=args.seed, retries=args.retries, field=field)
    split = split_detect(V.G)
    qc = question_certificate("Y", split, V.X.field.caveat())
    hd = hilbert(V.I_y)
    h0 = {nu: h0_twist(V.G, nu) for nu in (2, 3)}
    rep = divisibility_report(V.I_y, V.G, V.d, free_twists=[-g.degree() for g in V.y_generators],
                              shift=0)
    lines = [
        f"voisin d={V.d} seed={V.seed} attempts={V.attempts}",
        f"X: {format_poly(V.f)}",
        f"X smooth: {_yes(V.smooth)}",
        "Y generator degrees on X: " + " ".join(map(str, V.y_generator_degrees)),
        f"Hilbert polynomial of Y: {hd.polynomial_str()}",
        f"ACM: {_yes(V.acm.acm)} (pd_S(S/I_Y) = {V.acm.pd_s}, codim {V.acm.codim})",
        f"G: {V.G.generators.rank} generators, rank {split.mf.rank}",
        f"h0(G(2)) = {h0[2]}",
        f"h0(G(3)) = {h0[3]}",
        f"split: {_yes(split.is_split)} (core size {split.core_size})",
        f"Q2: {qc.q2}",
        f"Q3: {qc.q3}",
    ]
    lines += [f"note: {n}" for n in V.notes]
    data = V.to_json()
    data.update({"split": split.to_json(), "certificate": qc.to_json(),
                 "hilbert": hd.to_json(), "h0": {str(k): v for k, v in h0.items()},
                 "divisibility": rep.to_json()})
    return "\n".join(lines) + "\n" + _report_text(rep), data


def cmd_linspace(job, args):
    X = _need_x(job)
    if job.linear is None:
        raise UsageError("linspace needs a 'linear' line")
    B = linear_space_bundle(X, job.linear, seed=args.seed)
    mf = B.split.mf
    text = (f"codimension of L in X: {B.r}\nkernel: syzygy module {B.stage} of I(L) over S_X, "
            f"{B.module.generators.rank} generators\nACM: {_yes(B.acm.acm)} (pd_S = {B.acm.pd_s})\n"
            f"locally free: {_yes(bool(B.acm.locally_free))}\n"
            f"matrix factorization: size {mf.size}, rank {mf.rank}, reduced {_yes(mf.reduced)}\n"
            f"split: {_yes(B.split.is_split)} (core size {B.split.core_size})\n")
    return text, B.to_json()


def cmd_kleiman(job, args):
    X = _need_x(job)
    G = _module(job, args.seed)
    twists = _twist_list(args.twists) or job.twists
    K = kleiman_locus(G, twists, seed=args.seed, retries=args.retries)
    rep = divisibility_report(K.ideal, G, X.degree_of_relation, free_twists=K.twists)
    text = (f"twists: {K.twists} (attempts {K.attempts})\nI_Y:\n"
            + "".join(f"  {format_poly(g)}\n" for g in K.ideal.basis())
            + f"degree of Y: {K.degree}\nACM: {_yes(K.acm.acm)} (pd_S = {K.acm.pd_s})\n"
            f"G split: {_yes(K.certificate.split['split'])}\n"
            f"Q2: {K.certificate.q2}\nQ3: {K.certificate.q3}\n")
    if K.determinantal is not None:
        text += "determinantal S: " + ", ".join(format_poly(g) for g in K.determinantal.gens) + "\n"
    data = K.to_json()
    data["divisibility"] = rep.to_json()
    return text + _report_text(rep), data


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="acm-forge",
        description="ACM bundles and subvarieties on hypersurfaces: Groebner bases, "
                    "resolutions, matrix factorizations and certificates.",
        epilog="Exit codes: 0 ok, 2 precondition/parse error, 3 invariant violation, "
               "4 retry bound exhausted. No environment variables are read.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="job file ('-' for stdin)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-length", type=int, default=4)
    p.add_argument("--retries", type=int, default=5)
    p.add_argument("--json", metavar="PATH")
    p.add_argument("--verify", action="store_true", help="re-run internal consistency checks")
    p.add_argument("--over", choices=("S", "S_X"), default="S", help="ring for resolve/betti")
    p.add_argument("--d", type=int, default=2, help="hypersurface degree for voisin")
    p.add_argument("--nu", type=int, help="twist for h0")
    p.add_argument("--twists", help="twists for kleiman, e.g. '1 1 1'")
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.seed < 0 or args.seed >= 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        job = _load(args.input) if (args.input or args.command != "voisin") else None
        text, data = HANDLERS[args.command](job, args)
    except (ParseError, PreconditionError, StructuralError, UsageError, OSError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    except InvariantViolation as exc:
        err.write(f"error: InvariantViolation: {exc}\n")
        return 3
    except RetryBoundExceeded as exc:
        err.write(f"error: RetryBoundExceeded: {exc}\n")
        return 4
    out.write(text)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def main() -> None:
    sys.exit(run())
