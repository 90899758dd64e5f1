"""Built-in example corpus, shipped as problem files.

Every case is a plain problem description in the documented format, so the
corpus doubles as a test of the file format; nothing here is hard-coded in
the library.  Negative controls carry ``expect-<command> = invalid`` meta
keys that the corpus runner matches against.
"""

from __future__ import annotations

from importlib import resources

from ..problemfile import ProblemFile, parse_problem

FILES = (
    "tangent_r2",
    "aff1",
    "sl2_borel",
    "abelian",
    "sl3_chain",
    "poisson_r2",
    "symplectic_r2",
    "twisted_r3",
    "twisted_r4",
    "broken_jacobi",
    "nonclosed_psi_r4",
    "nonpoisson_r3",
)


def text(name: str) -> str:
    return resources.files(__package__).joinpath(f"{name}.alg").read_text("utf-8")


def load(name: str) -> ProblemFile:
    if name not in FILES:
        raise KeyError(f"unknown corpus case {name!r}")
    return parse_problem(text(name))
