"""Line-oriented job input.

    # comment
    field p=32003                  (or: field q=rational)
    ring x0 x1 x2 x3 x4
    hypersurface x0*x4 + x1*x3 + x2^2
    ideal x0*x2, x0*x3, x1*x2, x1*x3
    generators 1 1                 module generator degrees
    relation x1, -x0               one relation column per line
    linear x2, x3, x4              (or: linear empty)
    twists 1 1 1
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .field import Field, StructuralError
from .matrix import GradedFreeModule, GradedMatrix
from .poly import GradedRing, ParseError, Poly, format_poly

_SINGLE = ("field", "ring", "hypersurface", "ideal", "generators", "linear", "twists")
_KNOWN = _SINGLE + ("relation",)


@dataclass
class JobSpec:
    field: Field
    names: list[str]
    hypersurface: Poly | None = None
    ideal: list[Poly] | None = None
    generators: list[int] | None = None
    relations: list[list[Poly]] = field(default_factory=list)
    linear: list[Poly] | str | None = None
    twists: list[int] | None = None

    @property
    def S(self) -> GradedRing:
        if self.hypersurface is not None:
            return self.hypersurface.ring
        return GradedRing(self.names, self.field)

    @property
    def X(self) -> GradedRing | None:
        return self.S.quotient(self.hypersurface) if self.hypersurface is not None else None

    def format(self) -> str:
        lines = [f"field {self.field.descriptor()}", "ring " + " ".join(self.names)]
        if self.hypersurface is not None:
            lines.append("hypersurface " + format_poly(self.hypersurface))
        if self.ideal is not None:
            lines.append("ideal " + ", ".join(format_poly(g) for g in self.ideal))
        if self.generators is not None:
            lines.append("generators " + " ".join(map(str, self.generators)))
        for col in self.relations:
            lines.append("relation " + ", ".join(format_poly(g) for g in col))
        if self.linear is not None:
            body = self.linear if isinstance(self.linear, str) else ", ".join(
                format_poly(g) for g in self.linear)
            lines.append("linear " + body)
        if self.twists is not None:
            lines.append("twists " + " ".join(map(str, self.twists)))
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        return isinstance(other, JobSpec) and self.format() == other.format()

    def module_matrix(self) -> GradedMatrix:
        """The relation matrix (over S_X when a hypersurface is given)."""
        ring = self.X or self.S
        F0 = GradedFreeModule(ring, self.generators or [])
        cols = self.relations
        src = []
        for col in cols:
            j = next((k for k, p in enumerate(col) if not p.is_zero()), None)
            src.append(0 if j is None else col[j].degree() + F0.twists[j])
        rows = [[col[i] for col in cols] for i in range(F0.rank)]
        return GradedMatrix(F0, GradedFreeModule(ring, src), rows)


def _split_items(text: str, col: int):
    """Comma-separated pieces with their 1-based columns."""
    out, start = [], 0
    for k, piece in enumerate(text.split(",")):
        lead = len(piece) - len(piece.lstrip())
        out.append((piece.strip(), col + start + lead))
        start += len(piece) + 1
    return out


def _ints(text: str, line: int, col: int) -> list[int]:
    out, pos = [], 0
    for tok in text.split():
        at = text.index(tok, pos)
        pos = at + len(tok)
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", line, col + at) from None
    return out


def parse_job(text: str) -> JobSpec:
    entries: dict[str, tuple[str, int, int]] = {}
    relations: list[tuple[str, int, int]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        indent = len(stripped) - len(stripped.lstrip())
        body = stripped.strip()
        word = body.split(None, 1)[0]
        rest = body[len(word):]
        col = indent + len(word) + 1 + (len(rest) - len(rest.lstrip()))
        rest = rest.strip()
        if word not in _KNOWN:
            raise ParseError(f"unknown directive {word!r}", ln, indent + 1)
        if word == "relation":
            relations.append((rest, ln, col))
            continue
        if word in entries:
            raise ParseError(f"duplicate directive {word!r}", ln, indent + 1)
        entries[word] = (rest, ln, col)
    fld = Field()
    if "field" in entries:
        rest, ln, col = entries["field"]
        try:
            if rest == "q=rational":
                fld = Field.rational()
            elif rest.startswith("p="):
                fld = Field(int(rest[2:]))
            else:
                raise ValueError
        except (ValueError, StructuralError):
            raise ParseError(f"bad field descriptor {rest!r}", ln, col) from None
    if "ring" not in entries:
        raise ParseError("missing 'ring' directive", 1, 1)
    rest, ln, col = entries["ring"]
    names = rest.split()
    if not names or len(set(names)) != len(names):
        raise ParseError("ring needs distinct variable names", ln, col)
    try:
        S = GradedRing(names, fld)
    except (StructuralError, ValueError) as exc:
        raise ParseError(str(exc), ln, col) from None

    def polys(key_text, ln, col) -> list[Poly]:
        out = []
        for piece, c in _split_items(key_text, col):
            if not piece:
                raise ParseError("empty polynomial", ln, c)
            p = S.parse(piece, ln, c)
            if not p.is_homogeneous():
                raise ParseError("polynomial is not homogeneous", ln, c)
            out.append(p)
        return out

    job = JobSpec(fld, names)
    if "hypersurface" in entries:
        rest, ln, col = entries["hypersurface"]
        f = polys(rest, ln, col)
        if len(f) != 1 or f[0].is_zero() or f[0].degree() < 1:
            raise ParseError("hypersurface needs one nonconstant form", ln, col)
        job.hypersurface = f[0]
    if "ideal" in entries:
        job.ideal = polys(*entries["ideal"])
    if "generators" in entries:
        job.generators = _ints(*entries["generators"])
    if "twists" in entries:
        job.twists = _ints(*entries["twists"])
    if "linear" in entries:
        rest, ln, col = entries["linear"]
        job.linear = "empty" if rest == "empty" else polys(rest, ln, col)
    for rest, ln, col in relations:
        if job.generators is None:
            raise ParseError("relation before 'generators'", ln, col)
        col_polys = polys(rest, ln, col)
        if len(col_polys) != len(job.generators):
            raise ParseError(f"relation has {len(col_polys)} entries, expected "
                             f"{len(job.generators)}", ln, col)
        job.relations.append(col_polys)
    if job.relations:
        try:
            job.module_matrix()
        except StructuralError as exc:
            raise ParseError(f"relations are not graded: {exc}", relations[0][1], relations[0][2]) from None
    return job
