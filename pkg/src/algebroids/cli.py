"""Batch command-line interface.

Subcommands read a problem file (or the built-in corpus), run the requested
checks and emit a human-readable report, or flat machine records with
``--machine``.  Exit status: 0 when every check passed, 1 when a check
failed (the report carries witnesses), 2 when the input file itself could
not be parsed or resolved.
"""

from __future__ import annotations

import argparse
import sys

from .errors import (CalculusError, InvalidAlgebroid, NotAMorphism,
                     ProblemFileError, VanishingSection)
from .cohomology import exactness_search, is_cocycle
from .core import BundleMorphism, LieAlgebroid, validate_algebroid, is_morphism
from .exterior import FORM, GradedElement, MULTIVECTOR
from .liealg import (h1_class, invariant_measure_obstruction, modular_character,
                     relative_character)
from .modular import (LineRep, modular_section, rep_flatness_check,
                      relative_modular_section)
from .problemfile import ProblemFile, load_problem
from .ratfunc import RatFunc
from .report import (FAIL, INFO, PASS, CheckRecord, exit_code, human_lines,
                     machine_lines)
from .twisted import (TwistedStructure, check_twisted, cotangent_algebroid,
                      lam_as_dual_top, verify_theorem41)
from . import corpus

COMMANDS = ("validate", "modular", "relative-modular", "rep-check",
            "twisted-check", "theorem41", "lie-algebra", "cohomology")


def _tops_for(problem: ProblemFile, name: str, E: LieAlgebroid):
    omega = E.top_multivector(1)
    for mname, (host, elem) in problem.top_multivectors.items():
        if host == name:
            omega = elem
            break
    return omega


def _volume_for(problem: ProblemFile) -> GradedElement:
    for elem in problem.volumes.values():
        return elem
    from .core import tangent_algebroid
    tm = tangent_algebroid(problem.ctx)
    if tm.rank == 0:
        return GradedElement.scalar(problem.ctx, 0, FORM, RatFunc.one(problem.ctx))
    return tm.dual_top_form(1)


def _lam_for(problem: ProblemFile, name: str, E: LieAlgebroid) -> GradedElement:
    for host, elem in problem.top_forms.values():
        if host == name:
            return elem
    return E.dual_top_form(1)


def _algebroid_subjects(problem: ProblemFile):
    for kind, name in problem.order:
        if kind == "algebroid":
            yield name, problem.algebroids[name]
        elif kind == "lie-algebra" and name in problem.lie_algebras:
            yield name, problem.lie_algebras[name].as_algebroid()


def _twisted_subjects(problem: ProblemFile):
    for kind, name in problem.order:
        if kind != "bivector":
            continue
        host, pi = problem.bivectors[name]
        psi = None
        for pname, (phost, elem) in problem.threeforms.items():
            if phost == host:
                psi = elem
                break
        yield name, host, problem.algebroid_like(host), pi, psi


def _morphism_subjects(problem: ProblemFile):
    """Declared morphisms plus the derived anchors, inclusions and sharps."""
    for name, phi in problem.morphisms.items():
        yield name, phi
    for name, E in _algebroid_subjects(problem):
        yield f"anchor({name})", BundleMorphism.anchor_morphism(E)
    for name, inc in problem.subalgebras.items():
        yield f"inclusion({name})", inc.as_morphism()
    for name, host, A, pi, psi in _twisted_subjects(problem):
        T = check_twisted(A, pi, psi)
        if T.is_valid:
            _, sharp = cotangent_algebroid(T)
            yield f"sharp({name})", sharp


def _issue_records(problem: ProblemFile) -> list[CheckRecord]:
    return [CheckRecord(check=f"{kind}-build", subject=name, verdict=FAIL,
                        witness=message)
            for kind, name, message in problem.issues]


def cmd_validate(problem: ProblemFile, args) -> list[CheckRecord]:
    records = _issue_records(problem)
    for kind, name in problem.order:
        if kind == "algebroid":
            report = validate_algebroid(problem.algebroids[name])
            records.append(CheckRecord(
                check="algebroid-axioms", subject=name,
                verdict=PASS if report.valid else FAIL,
                witness=report.witness() if not report.valid else report.note))
        elif kind == "lie-algebra" and name in problem.lie_algebras:
            records.append(CheckRecord(check="jacobi-identity", subject=name,
                                       verdict=PASS))
        elif kind == "subalgebra" and name in problem.subalgebras:
            records.append(CheckRecord(check="subalgebra-closure", subject=name,
                                       verdict=PASS))
    return records


def cmd_modular(problem: ProblemFile, args) -> list[CheckRecord]:
    records = _issue_records(problem)
    mu = _volume_for(problem)
    for name, E in _algebroid_subjects(problem):
        omega = _tops_for(problem, name, E)
        lam = mu if E.ctx.dim else GradedElement.scalar(
            problem.ctx, 0, FORM, RatFunc.one(problem.ctx))
        try:
            xi = modular_section(E, omega, lam)
        except (InvalidAlgebroid, VanishingSection) as ex:
            records.append(CheckRecord(check="modular-section", subject=name,
                                       verdict=FAIL, witness=str(ex)))
            continue
        records.append(CheckRecord(check="modular-section", subject=name,
                                   verdict=PASS, witness=f"closed; xi = {xi}"))
    for name, host, A, pi, psi in _twisted_subjects(problem):
        T = check_twisted(A, pi, psi)
        if not T.is_valid:
            continue
        cot, _ = cotangent_algebroid(T)
        lam = _lam_for(problem, host, A)
        xi = modular_section(cot, lam_as_dual_top(lam), mu)
        records.append(CheckRecord(check="modular-section",
                                   subject=f"cotangent({name})",
                                   verdict=PASS, witness=f"closed; xi = {xi}"))
    return records


def cmd_relative_modular(problem: ProblemFile, args) -> list[CheckRecord]:
    records = _issue_records(problem)
    for name, phi in _morphism_subjects(problem):
        report = is_morphism(phi)
        if not report.passed:
            records.append(CheckRecord(check="morphism", subject=name,
                                       verdict=FAIL, witness=report.witness()))
            continue
        omega_e = phi.source.top_multivector(1)
        omega_f = phi.target.top_multivector(1)
        eta = relative_modular_section(phi, omega_e, omega_f)
        records.append(CheckRecord(check="relative-modular-section", subject=name,
                                   verdict=PASS, witness=f"closed; eta = {eta}"))
    return records


def cmd_rep_check(problem: ProblemFile, args) -> list[CheckRecord]:
    records = _issue_records(problem)
    for name, phi in _morphism_subjects(problem):
        F = phi.target
        if F.rank == 0:
            nu = GradedElement.scalar(F.ctx, 0, FORM, RatFunc.one(F.ctx))
        else:
            nu = F.dual_top_form(1)
        rep = LineRep(phi, phi.source.top_multivector(1), nu)
        flat = rep_flatness_check(rep, trials=3)
        records.append(CheckRecord(
            check="representation-flatness", subject=name,
            verdict=PASS if flat.passed else FAIL,
            witness="conditions (a) (b) (c) hold on frame data and randomized "
                    "sections" if flat.passed else flat.witness()))
    return records


def cmd_twisted_check(problem: ProblemFile, args) -> list[CheckRecord]:
    records = _issue_records(problem)
    for name, host, A, pi, psi in _twisted_subjects(problem):
        T = check_twisted(A, pi, psi)
        records.append(CheckRecord(
            check="twisted-compatibility", subject=name,
            verdict=PASS if T.is_valid else FAIL,
            witness="closed 3-form and compatibility equation hold exactly"
                    if T.is_valid else T.witness()))
        if T.is_valid:
            cot, _ = cotangent_algebroid(T)
            records.append(CheckRecord(
                check="cotangent-algebroid", subject=name, verdict=PASS,
                witness=f"dual algebroid of rank {cot.rank} validates; sharp is "
                        "a morphism"))
    return records


def cmd_theorem41(problem: ProblemFile, args) -> list[CheckRecord]:
    records = _issue_records(problem)
    mu = _volume_for(problem)
    for name, host, A, pi, psi in _twisted_subjects(problem):
        T = check_twisted(A, pi, psi)
        if not T.is_valid:
            records.append(CheckRecord(check="twisted-compatibility", subject=name,
                                       verdict=FAIL, witness=T.witness()))
            continue
        lam = _lam_for(problem, host, A)
        rep = verify_theorem41(T, lam, mu if A.ctx.dim else None)
        for cast in rep.role_casts:
            records.append(CheckRecord(check="role-cast", subject=name,
                                       verdict=INFO, witness=cast))
        records.append(CheckRecord(
            check="relative-section-is-twice-modular", subject=name,
            verdict=PASS if rep.w_equals_2z else FAIL,
            witness=f"W = {rep.W}; Z = {rep.Z}"))
        records.append(CheckRecord(
            check="relative-section-decomposition", subject=name,
            verdict=PASS if rep.decomposition_ok else FAIL,
            witness=f"Mod(dual) = {rep.xi_dual}; pullback of Mod(base) = "
                    f"{rep.xi_base_pullback}"))
        if rep.corollary_applicable:
            records.append(CheckRecord(
                check="tangent-case-reduction", subject=name,
                verdict=PASS if rep.corollary_ok else FAIL,
                witness="pullback term vanishes; dual modular section equals W"))
        records.append(CheckRecord(
            check="twist-term", subject=name, verdict=INFO,
            witness=f"Y = {rep.Y} ({'nonzero' if rep.y_nonzero else 'zero'})"))
    return records


def cmd_lie_algebra(problem: ProblemFile, args) -> list[CheckRecord]:
    records = _issue_records(problem)
    for kind, name in problem.order:
        if kind == "lie-algebra" and name in problem.lie_algebras:
            g = problem.lie_algebras[name]
            chi = modular_character(g)
            h1 = h1_class(g, chi)
            records.append(CheckRecord(
                check="modular-character", subject=name, verdict=PASS,
                witness=f"chi = {chi}; {h1.text}"))
        elif kind == "subalgebra" and name in problem.subalgebras:
            inc = problem.subalgebras[name]
            obs = invariant_measure_obstruction(inc)
            records.append(CheckRecord(
                check="invariant-measure-obstruction", subject=name, verdict=PASS,
                witness=obs.verdict))
            records.append(CheckRecord(
                check="hypothesis", subject=name, verdict=INFO,
                witness=obs.hypothesis))
    return records


def cmd_cohomology(problem: ProblemFile, args) -> list[CheckRecord]:
    records = _issue_records(problem)
    bound = args.degree_bound
    for kind, name in problem.order:
        if kind != "cochain":
            continue
        host, xi = problem.cochains[name]
        E = problem.algebroid_like(host)
        closed, residual = is_cocycle(E, xi)
        records.append(CheckRecord(
            check="cocycle", subject=name,
            verdict=PASS if closed else FAIL,
            witness="" if closed else f"differential residual {residual}"))
        if closed:
            verdict = exactness_search(E, xi, degree_bound=bound)
            witness = verdict.note
            if verdict.found:
                witness = f"primitive {verdict.primitive}; {verdict.note}"
            records.append(CheckRecord(check="exactness", subject=name,
                                       verdict=INFO,
                                       witness=f"{verdict.status}: {witness}"))
    return records


_HANDLERS = {
    "validate": cmd_validate,
    "modular": cmd_modular,
    "relative-modular": cmd_relative_modular,
    "rep-check": cmd_rep_check,
    "twisted-check": cmd_twisted_check,
    "theorem41": cmd_theorem41,
    "lie-algebra": cmd_lie_algebra,
    "cohomology": cmd_cohomology,
}


def _run_corpus(command: str, args) -> list[CheckRecord]:
    records: list[CheckRecord] = []
    handler = _HANDLERS[command]
    for name in corpus.FILES:
        problem = corpus.load(name)
        case_records = handler(problem, args)
        if not case_records:
            continue
        expectation = problem.meta.get(f"expect-{command}")
        if expectation is None and all(rec.check.endswith("-build")
                                       for rec in case_records):
            # build problems in objects this command would never touch
            continue
        title = problem.meta.get("name", name)
        records.append(CheckRecord(check="corpus-case", subject=name,
                                   verdict=INFO, witness=title))
        if "provenance" in problem.meta:
            records.append(CheckRecord(check="provenance", subject=name,
                                       verdict=INFO,
                                       witness=problem.meta["provenance"]))
        expect = problem.meta.get(f"expect-{command}", "valid")
        if expect == "invalid":
            failures = [rec for rec in case_records if rec.failed]
            if failures:
                records.append(CheckRecord(
                    check="negative-control", subject=name, verdict=PASS,
                    witness=f"rejected as expected: {failures[0].witness}"))
            else:
                records.append(CheckRecord(
                    check="negative-control", subject=name, verdict=FAIL,
                    witness="expected a rejection but every check passed"))
        else:
            records.extend(case_records)
    return records


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="algebroids",
        description="exact modular-class calculus for Lie algebroids")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("file", nargs="?", help="problem description file")
        p.add_argument("--corpus", action="store_true",
                       help="run on the built-in corpus instead of a file")
        p.add_argument("--machine", nargs="?", const="-", metavar="PATH",
                       help="emit machine-readable records (to PATH or stdout)")
        p.add_argument("--degree-bound", type=int, default=6,
                       help="polynomial degree bound for exactness searches")
    args = parser.parse_args(argv)

    try:
        if args.corpus:
            records = _run_corpus(args.command, args)
        else:
            if not args.file:
                print("error: a problem file or --corpus is required",
                      file=sys.stderr)
                return 2
            problem = load_problem(args.file)
            records = _HANDLERS[args.command](problem, args)
    except (ProblemFileError, OSError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2

    if args.machine == "-":
        sys.stdout.write(machine_lines(records))
    elif args.machine:
        with open(args.machine, "w", encoding="utf-8") as handle:
            handle.write(machine_lines(records))
        sys.stdout.write(human_lines(records))
    else:
        sys.stdout.write(human_lines(records))
    return exit_code(records)


if __name__ == "__main__":
    sys.exit(main())
