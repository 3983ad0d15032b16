"""Command-line front end.

Exit codes: 0 when the top-level verdict is ok, 1 when the input is well formed
but the property fails, 2 for input, bound or usage errors.  Indices in
reports are 1-based.
"""
from __future__ import annotations

import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import __version__
from .bialgebra import (check_perm_bialgebra, coboundary_delta, is_s_solution,
                        manin_triple_from_bialgebra, s_equation_residual)
from .errors import NonAbelianKernel, PermlabError, PreconditionFailed
from .extensions import (MatchedPair, bicrossed_product, unified_product,
                         validate_extending_structure, validate_matched_pair)
from .flag import ES7_MODES, datum_from_flag, enumerate_flag_extensions, validate_flag_datum
from .io import algebra_to_obj, dumps, field_from_name, fmt_map, fmt_tensor, load
from .kernel import Field, Verdict, flat_key, require_bound
from .nonabelian import (NAB_MODES, WellsContext, compatible, crossed_product,
                         enumerate_automorphism_groups, is_inducible, quotient_algebra,
                         validate_cocycle, wells_map)
from .perm_core import (AlgebraMorphism, PermAlgebra, automorphisms, canonical_form,
                        check_invariant_form, check_morphism, check_perm,
                        check_representation, semidirect_product)

CHECKS = ("perm", "rep", "cocycle", "flag", "datum", "bialgebra", "manin",
          "invariant-form", "morphism")
PRODUCTS = ("unified", "bicrossed", "crossed", "semidirect", "manin")
ENUMS = ("perm", "flag", "aut", "s-solutions")


class Failure(Exception):
    """Well-formed input whose requested construction is refused (exit 1)."""

    def __init__(self, verdict: Verdict, message: str):
        super().__init__(message)
        self.verdict = verdict


def violations_obj(verdict: Verdict) -> list:
    return [{"id": name, "indices": [int(i) + 1 for i in idx]} for name, idx in verdict.violations]


def report(command: str, verdict: Verdict | str, **extra) -> dict:
    status = verdict if isinstance(verdict, str) else verdict.status
    out = {"command": command, "verdict": status}
    if not isinstance(verdict, str):
        out["violations"] = violations_obj(verdict)
    out.update(extra)
    out["version"] = __version__
    return out


def render_text(rep: dict) -> str:
    lines = []

    def walk(key, val, indent):
        pad = "  " * indent
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            for k, v in val.items():
                walk(k, v, indent + 1)
        elif isinstance(val, list) and val and isinstance(val[0], (dict, list)):
            lines.append(f"{pad}{key}: {len(val)} item(s)")
            for i, v in enumerate(val, 1):
                walk(f"[{i}]", v, indent + 1)
        else:
            shown = " ".join(str(x) for x in val) if isinstance(val, list) else val
            lines.append(f"{pad}{key}: {shown}")

    for k, v in rep.items():
        walk(k, v, 0)
    return "\n".join(lines) + "\n"


def emit(rep: dict, as_json: bool, out: str | None = None) -> None:
    text = dumps(rep) if as_json else render_text(rep)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def exit_code(rep: dict) -> int:
    return 0 if rep["verdict"] == "ok" else 1


def run(fn):
    """Map library errors onto the exit-code contract."""
    try:
        code = fn()
    except Failure as exc:
        click.echo(f"error: {exc}", err=True)
        code = 1
    except NonAbelianKernel as exc:
        click.echo(f"error: {exc}; use `permlab check --what cocycle` and the inducibility API "
                   "for non-abelian kernels", err=True)
        code = 2
    except PermlabError as exc:
        click.echo(f"error: {exc}", err=True)
        code = 2
    sys.exit(code)


def _timed(rep: dict, start: float, timing: bool) -> dict:
    if timing:
        rep["timing"] = round(time.perf_counter() - start, 6)
    return rep


@click.group()
@click.version_option(__version__, prog_name="permlab")
def main():
    """Exact computations with perm algebras."""


common_json = click.option("--json", "as_json", is_flag=True, help="Machine-readable report.")
common_timing = click.option("--timing", is_flag=True, help="Add wall-clock seconds (breaks byte identity).")


# -- check --------------------------------------------------------------------------

@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--what", type=click.Choice(CHECKS), default="perm", show_default=True)
@click.option("--mode", default=None, help="Equation variant: derived/literal (cocycle), corrected/literal (flag).")
@click.option("--skew", is_flag=True, help="invariant-form: also require skew-symmetry.")
@click.option("--symmetric", is_flag=True, help="invariant-form: also require symmetry.")
@click.option("--nondegenerate", is_flag=True, help="invariant-form: also require nondegeneracy.")
@common_json
@common_timing
def check(file, what, mode, skew, symmetric, nondegenerate, as_json, timing):
    """Validate the object encoded in FILE."""
    def body():
        start = time.perf_counter()
        d = load(file)
        A = d.algebra
        extra = {"what": what}
        if what == "perm":
            verdict = check_perm(A)
        elif what == "rep":
            verdict = check_representation(d.rep())
        elif what == "cocycle":
            m = mode or "derived"
            if m not in NAB_MODES:
                raise PermlabError(f"unknown cocycle mode {m!r}")
            verdict = validate_cocycle(d.cocycle(), m)
            extra["mode"] = m
        elif what == "flag":
            m = mode or "corrected"
            if m not in ES7_MODES:
                raise PermlabError(f"unknown flag mode {m!r}")
            verdict = validate_flag_datum(d.flag(), m)
            extra["mode"] = m
        elif what == "datum":
            verdict = validate_extending_structure(d.datum())
        elif what in ("bialgebra", "manin"):
            delta = d.delta()
            verdict = Verdict.of(("perm", idx) for _, idx in check_perm(A).violations)
            if verdict.ok:
                verdict = check_perm_bialgebra(delta)
            if verdict.ok and what == "manin":
                triple = manin_triple_from_bialgebra(delta)
                verdict = triple.verdict
                extra["double"] = algebra_to_obj(triple.E, with_field=False)
        elif what == "invariant-form":
            verdict = check_invariant_form(A, d.form(), symmetric=symmetric, skew=skew,
                                           nondegenerate=nondegenerate)
        else:
            target, matrix = d.map()
            verdict = check_morphism(AlgebraMorphism(A, target, matrix))
        rep = _timed(report("check", verdict, **extra), start, timing)
        emit(rep, as_json)
        return exit_code(rep)
    run(body)


# -- product -------------------------------------------------------------------------

def build_product(d, kind: str) -> tuple[PermAlgebra, str]:
    if kind == "unified":
        datum = datum_from_flag(d.flag()) if d.has("flag") and not d.has("datum") else d.datum()
        verdict = validate_extending_structure(datum)
        if not verdict.ok:
            raise Failure(verdict, "not an extending structure")
        return unified_product(datum, checked=False), "unified product"
    if kind == "bicrossed":
        datum = d.datum()
        if np.count_nonzero(datum.chi):
            raise Failure(Verdict.of([("chi", ())]), "a matched pair has chi = 0")
        V = PermAlgebra(d.field, datum.dot, datum.v_basis)
        mp = MatchedPair(d.algebra, V, datum.br, datum.bl, datum.tr, datum.tl)
        verdict = validate_matched_pair(mp)
        if not verdict.ok:
            raise Failure(verdict, "not a matched pair")
        return bicrossed_product(mp, checked=False), "bicrossed product"
    if kind == "crossed":
        c = d.cocycle()
        verdict = validate_cocycle(c)
        if not verdict.ok:
            raise Failure(verdict, "not a non-abelian 2-cocycle")
        return crossed_product(c, checked=False), "crossed product"
    if kind == "semidirect":
        rep = d.rep()
        verdict = check_representation(rep)
        if not verdict.ok:
            raise Failure(verdict, "not a representation")
        return semidirect_product(d.algebra, rep), "semidirect product"
    delta = d.delta()
    verdict = check_perm_bialgebra(delta)
    if not verdict.ok:
        raise Failure(verdict, "not a perm bialgebra")
    return manin_triple_from_bialgebra(delta).E, "double on A + A*"


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--kind", type=click.Choice(PRODUCTS), default="unified", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the algebra here.")
@common_json
def product(file, kind, out, as_json):
    """Build an algebra from the blocks in FILE and emit it as a definition file."""
    def body():
        d = load(file)
        try:
            E, note = build_product(d, kind)
        except Failure as exc:
            emit(report("product", exc.verdict, kind=kind), as_json)
            return 1
        obj = algebra_to_obj(E)
        obj["note"] = note
        text = dumps(obj)
        if out:
            Path(out).write_text(text)
            emit(report("product", Verdict(), kind=kind, out=str(out)), as_json)
        else:
            click.echo(text, nl=False)
        return 0
    run(body)


# -- enumerate -----------------------------------------------------------------------

def _perm_chunk(args) -> list:
    p, n, head = args
    F = Field(p)
    found = []
    rest = n ** 3 - 1
    for tail in F.tensors((rest,)):
        sc = np.concatenate([[head], tail]).astype(F.dtype).reshape(n, n, n)
        if check_perm(PermAlgebra(F, sc)).ok:
            found.append(sc)
    return found


def _s_chunk(args) -> list:
    p, sc, head = args
    F = Field(p)
    A = PermAlgebra(F, np.array(sc, dtype=F.dtype))
    from .bialgebra import RTensor
    n = A.dim
    iu = [(i, j) for i in range(n) for j in range(i, n)]
    found = []
    for tail in F.tensors((len(iu) - 1,)):
        vals = [head] + [int(x) for x in tail]
        r = F.zeros((n, n))
        for (i, j), v in zip(iu, vals):
            r[i, j] = r[j, i] = v
        if is_s_solution(RTensor(A, r)):
            found.append(r)
    return found


def sweep(fn, tasks: list, jobs: int) -> list:
    """Run ``fn`` over tasks, serially or in worker processes; results keep task order."""
    if jobs <= 1 or len(tasks) <= 1:
        parts = [fn(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(fn, tasks))
    return [x for part in parts for x in part]


def enumerate_perm(F: Field, n: int, up_to: str, jobs: int = 1) -> list:
    require_bound(F.p ** (n ** 3), f"perm sweep in dim {n}")
    if n == 0:
        return [PermAlgebra(F, F.zeros((0, 0, 0)))]
    tasks = [(F.p, n, h) for h in F.elements()]
    found = sorted(sweep(_perm_chunk, tasks, jobs), key=flat_key)
    algebras = [PermAlgebra(F, sc) for sc in found]
    if up_to == "none":
        return algebras
    from .kernel import general_linear
    gl = list(general_linear(F, n))
    reps: dict = {}
    for A in algebras:
        reps.setdefault(canonical_form(A, gl), A)
    return [PermAlgebra(F, np.array(k, dtype=F.dtype).reshape(n, n, n)) for k in sorted(reps)]


def enumerate_s_solutions(A: PermAlgebra, jobs: int = 1) -> list:
    F = A.field
    n = A.dim
    require_bound(F.p ** (n * (n + 1) // 2), "symmetric r sweep")
    if n == 0:
        return [F.zeros((0, 0))]
    tasks = [(F.p, A.sc.tolist(), h) for h in F.elements()]
    return sorted(sweep(_s_chunk, tasks, jobs), key=flat_key)


@main.command(name="enumerate")
@click.argument("file", required=False, type=click.Path(dir_okay=False))
@click.option("--what", type=click.Choice(ENUMS), default="perm", show_default=True)
@click.option("--dim", type=int, default=None, help="Dimension (perm sweeps).")
@click.option("--field", "field_name", default=None, help="gf<p> or q; defaults to the file's field.")
@click.option("--up-to", type=click.Choice(("none", "iso", "equiv")), default="none", show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes.")
@click.option("--mode", default="corrected", show_default=True, help="Flag equation variant.")
@common_json
@common_timing
def enumerate_cmd(file, what, dim, field_name, up_to, jobs, mode, as_json, timing):
    """Exhaustive sweeps over GF(p)."""
    def body():
        start = time.perf_counter()
        d = load(file) if file else None
        F = field_from_name(field_name) if field_name else (d.field if d else None)
        if F is None:
            raise PermlabError("--field is required without a file")
        if d is not None and d.field != F:
            raise PermlabError(f"--field {F} does not match the file's field {d.field}")
        if not F.is_finite:
            raise PermlabError("enumeration needs a prime field")
        extra = {"what": what, "field": F.to_json(), "up_to": up_to}
        if what == "perm":
            if dim is None or dim < 0:
                raise PermlabError("--dim is required for perm sweeps")
            if up_to == "equiv":
                raise PermlabError("perm sweeps support --up-to none or iso")
            algebras = enumerate_perm(F, dim, up_to, jobs)
            extra.update(dim=dim, count=len(algebras),
                         representatives=[algebra_to_obj(A, with_field=False) for A in algebras])
        else:
            if d is None:
                raise PermlabError(f"--what {what} needs an algebra file")
            A = d.algebra
            if not check_perm(A).ok:
                raise PreconditionFailed("the file's algebra is not perm")
            extra["dim"] = A.dim
            if what == "flag":
                if mode not in ES7_MODES:
                    raise PermlabError(f"unknown flag mode {mode!r}")
                res = enumerate_flag_extensions(A, mode)
                items = res.representatives if up_to == "equiv" else res.datums
                if up_to == "iso":
                    from .perm_core import find_isomorphism
                    seen: list = []
                    for fd, E in zip(res.representatives, res.algebras):
                        if not any(find_isomorphism(E, other) for _, other in seen):
                            seen.append((fd, E))
                    items = tuple(fd for fd, _ in seen)
                extra.update(count=len(items), datums=[_flag_obj(fd) for fd in items])
            elif what == "aut":
                mats = sorted(automorphisms(A), key=flat_key)
                extra.update(count=len(mats), automorphisms=[fmt_map(F, g) for g in mats])
                if d.has("extension"):
                    idx = d.extension()
                    groups = enumerate_automorphism_groups(A, idx)
                    extra["groups"] = {"aut": len(groups.aut_E), "aut_kernel": len(groups.aut_A_E),
                                       "aut_kernel_id": len(groups.aut_A_id),
                                       "kappa_image": len(groups.kappa_image),
                                       "exact": groups.exact()}
            else:
                sols = enumerate_s_solutions(A, jobs)
                extra.update(count=len(sols), solutions=[fmt_tensor(F, r) for r in sols])
        rep = _timed(report("enumerate", "ok", **extra), start, timing)
        emit(rep, as_json)
        return 0
    run(body)


def _flag_obj(fd) -> dict:
    F = fd.A.field
    return {"h": fmt_tensor(F, fd.h), "g": fmt_tensor(F, fd.g), "D": fmt_map(F, fd.D),
            "T": fmt_map(F, fd.T), "a_tilde": fmt_tensor(F, fd.a_tilde),
            "k_tilde": F.format(fd.k_tilde)}


# -- wells ---------------------------------------------------------------------------

@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@common_json
@common_timing
def wells(file, as_json, timing):
    """Compatibility, Wells class and inducibility of the pair in FILE."""
    def body():
        start = time.perf_counter()
        d = load(file)
        E = d.algebra
        idx = d.extension()
        B = quotient_algebra(E, idx)
        ctx = WellsContext.from_extension(E, idx)
        pair = d.pair(len(idx), B.dim)
        F = d.field
        is_compat = compatible(ctx, pair)
        extra = {"compatible": is_compat}
        if is_compat:
            image = wells_map(ctx, pair)
            ind = is_inducible(ctx.cocycle, pair)
            extra.update(wells_vanishes=image.vanishes, inducible=ind.status)
            if ind.witness is not None:
                extra["lambda"] = fmt_map(F, ind.witness)
                extra["alpha"] = fmt_map(F, ind.alpha)
            if (ind.status != "unknown") and image.vanishes != bool(ind):
                extra["consistent"] = False
            status = {"yes": "ok", "no": "fail"}.get(ind.status, "unknown")
        else:
            status = "fail"
        rep = _timed(report("wells", status, **extra), start, timing)
        emit(rep, as_json)
        return exit_code(rep)
    run(body)


# -- sequation -----------------------------------------------------------------------

@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@common_json
@common_timing
def sequation(file, as_json, timing):
    """S-equation residual of the r block, and the coboundary comultiplication."""
    def body():
        start = time.perf_counter()
        d = load(file)
        F = d.field
        rt = d.r()
        res = s_equation_residual(rt)
        entries = [{"indices": [int(i) + 1 for i in idx], "value": F.format(res[idx])}
                   for idx in zip(*np.nonzero(res != 0))]
        delta = coboundary_delta(rt)
        bialg = check_perm_bialgebra(delta)
        extra = {"symmetric": rt.symmetric, "solution": is_s_solution(rt), "residual": entries,
                 "delta": fmt_tensor(F, delta.delta), "bialgebra": bialg.status,
                 "bialgebra_violations": violations_obj(bialg)}
        rep = _timed(report("sequation", "ok" if is_s_solution(rt) else "fail", **extra), start, timing)
        emit(rep, as_json)
        return exit_code(rep)
    run(body)


if __name__ == "__main__":  # pragma: no cover
    main()
