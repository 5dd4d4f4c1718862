"""Sub-word enumeration, codebook construction, and recognition.

A codebook maps (glyph, position) to a canonical code extracted from
renderings at several sizes, plus a fingerprint of codes unique to the
font.  The corpus is a directory of pre-rendered rasters laid out as
``<corpus>/<position>/<glyph-seq>/<size>.pbm`` where glyph-seq joins the
spec's glyph ids with '-'.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass, field

from .encoder import (
    EncoderConfig,
    SubWordCode,
    WordCode,
    encode_word,
    scale_subword,
    subword_from_obj,
    subword_to_obj,
)
from .matcher import (
    MatchTolerances,
    find_matches,
    sequence_equiv,
    subset_alignment,
)
from .raster import load_image

__all__ = [
    "Position",
    "ConnectivityTable",
    "SubWordSpec",
    "CharacterCode",
    "Codebook",
    "CodebookFormatError",
    "EmptyCommonError",
    "arabic_connectivity",
    "enumerate_subwords",
    "extract_common_code",
    "build_codebook",
    "build_fingerprints",
    "identify_font",
    "recognize",
    "save_codebook",
    "load_codebook",
]

SCHEMA_VERSION = 1


class CodebookFormatError(ValueError):
    """Unreadable or wrong-version codebook file."""


class EmptyCommonError(ValueError):
    """No nonempty common subsequence across the input codes."""


class Position(enum.Enum):
    ISOLATED = "isolated"
    BEGINNING = "beginning"
    MIDDLE = "middle"
    END = "end"


@dataclass(frozen=True)
class ConnectivityTable:
    """Per-glyph junction flags plus the designated neutral connector.

    `entries` holds (glyph id, connects-right, connects-left); "right"
    means the glyph joins the preceding character (script flows right to
    left), "left" that it joins the following one.  The connector is the
    elongation glyph used to scaffold generated sub-words.
    """

    entries: tuple[tuple[str, bool, bool], ...]
    connector: str = "KASHEEDA"

    @property
    def glyphs(self) -> list[str]:
        return [g for g, _, _ in self.entries]

    @property
    def right_connective(self) -> list[str]:
        return [g for g, r, _ in self.entries if r]

    @property
    def left_connective(self) -> list[str]:
        return [g for g, _, l in self.entries if l]


# Arabic alphabet plus the elongation stroke; 36 right- and 25
# left-connective glyphs.
_ARABIC = [
    ("KASHEEDA", True, True),
    ("ALIF_HAMZA_ABOVE", True, False),
    ("ALIF_HAMZA_BELOW", True, False),
    ("ALIF", True, False),
    ("BAA", True, True),
    ("TAA", True, True),
    ("THAA", True, True),
    ("JEEM", True, True),
    ("HAA", True, True),
    ("KHAA", True, True),
    ("DAL", True, False),
    ("THAL", True, False),
    ("RAA", True, False),
    ("ZAY", True, False),
    ("SEEN", True, True),
    ("SHEEN", True, True),
    ("SAAD", True, True),
    ("DAAD", True, True),
    ("TAH", True, True),
    ("ZAH", True, True),
    ("AIN", True, True),
    ("GHAIN", True, True),
    ("FAA", True, True),
    ("QAF", True, True),
    ("KAF", True, True),
    ("LAM", True, True),
    ("MEEM", True, True),
    ("NOON", True, True),
    ("HA", True, True),
    ("WAW", True, False),
    ("WAW_HAMZA", True, False),
    ("ALIF_MAQSURA", True, True),
    ("YAA", True, True),
    ("YAA_HAMZA", True, True),
    ("HAMZA", True, False),
    ("TAA_MARBUTA", True, False),
]


def arabic_connectivity() -> ConnectivityTable:
    """The shipped Arabic connectivity fixture (36 glyphs incl. KASHEEDA)."""
    return ConnectivityTable(tuple(_ARABIC))


@dataclass(frozen=True)
class SubWordSpec:
    """A generated glyph sequence rendered to collect character forms."""

    glyphs: tuple[str, ...]
    position: Position

    @property
    def target_index(self) -> int:
        """Slot of the glyph whose positional form this spec exercises."""
        if self.position in (Position.ISOLATED, Position.BEGINNING):
            return 0
        if self.position == Position.MIDDLE:
            return 1 if len(self.glyphs) > 1 else 0
        return len(self.glyphs) - 1

    @property
    def target(self) -> str:
        return self.glyphs[self.target_index]

    @property
    def name(self) -> str:
        return "-".join(self.glyphs)


def enumerate_subwords(table: ConnectivityTable, position: Position):
    """Generate the sub-word specs rendered for one positional form.

    Sequences are scaffolded around the connector glyph: the variable
    slots range over the right-connective set R when they close a
    sequence and the left-connective set L when another glyph follows,
    which reproduces the |R|, |L|, and |L|x|R| counts of the reference
    connectivity table.
    """
    if not table.entries:
        return []
    k = table.connector
    r = table.right_connective
    l = table.left_connective
    specs: list[SubWordSpec] = []
    if position == Position.ISOLATED:
        for g in table.glyphs:
            specs.append(SubWordSpec((g,), position))
    elif position == Position.BEGINNING:
        for g in r:
            specs.append(SubWordSpec((g, k), position))
        for a in l:
            for b in r:
                specs.append(SubWordSpec((a, b, k), position))
    elif position == Position.MIDDLE:
        for a in l:
            for b in r:
                specs.append(SubWordSpec((k, a, b), position))
    else:  # END
        for g in l:
            specs.append(SubWordSpec((k, g), position))
        for a in l:
            for b in r:
                specs.append(SubWordSpec((a, k, b), position))
    return specs


@dataclass(frozen=True)
class CharacterCode:
    glyph: str
    position: Position
    code: SubWordCode


@dataclass
class Codebook:
    font: str
    tolerances: MatchTolerances
    entries: dict[tuple[str, str], CharacterCode] = field(default_factory=dict)
    fingerprint: list[SubWordCode] = field(default_factory=list)
    flagged: list[tuple[str, str]] = field(default_factory=list)
    skipped: int = 0


def _flatten(word: WordCode) -> SubWordCode:
    """Concatenate a word's sub-word elements into one sequence."""
    elements = []
    for entry in word.subwords:
        elements.extend(entry.code.elements)
    return SubWordCode(tuple(elements))


def _matched_counterparts(window, code: SubWordCode, t: MatchTolerances):
    align = subset_alignment(window, code.elements, t)
    if align is None:
        return None
    return [code.elements[r] for r in align]


def _average_window(window, inputs, t: MatchTolerances):
    """Average lengths/axes of the window over its matched counterparts."""
    from dataclasses import replace

    from .encoder import CodedElement, LineSegmentCode
    from .geomfit import EllipseArcCode

    counterparts = [list(window)]
    for code in inputs:
        matched = _matched_counterparts(window, code, t)
        if matched is None:
            return None
        counterparts.append(matched)
    out = []
    for i, el in enumerate(window):
        peers = [c[i].code for c in counterparts]
        code = el.code
        if isinstance(code, LineSegmentCode):
            ls = [p.l for p in peers if isinstance(p, LineSegmentCode)]
            code = replace(code, l=sum(ls) / len(ls))
        elif isinstance(code, EllipseArcCode):
            axes_a = [p.a for p in peers if isinstance(p, EllipseArcCode)]
            axes_b = [p.b for p in peers if isinstance(p, EllipseArcCode)]
            code = replace(
                code,
                a=sum(axes_a) / len(axes_a),
                b=sum(axes_b) / len(axes_b),
            )
        out.append(CodedElement(code, el.dirs, el.anchor))
    return tuple(out)


def extract_common_code(codes, sizes, t: MatchTolerances) -> SubWordCode:
    """Common code across renderings of one spec at several sizes.

    Each code is scale-normalized by its render size, then the longest
    contiguous window of the shortest input that is a sequence subset of
    every input wins; its lengths and axes are averaged over the matched
    counterparts.
    """
    if not codes or len(codes) != len(sizes):
        raise ValueError("need one code per render size")
    normed = [scale_subword(c, 1.0 / s) for c, s in zip(codes, sizes)]
    if len(normed) == 1:
        return normed[0]
    base = min(normed, key=len)
    others = [c for c in normed if c is not base]
    n = len(base.elements)
    for length in range(n, 0, -1):
        for start in range(0, n - length + 1):
            window = base.elements[start : start + length]
            averaged = _average_window(window, others, t)
            if averaged is not None:
                return SubWordCode(averaged)
    raise EmptyCommonError("no common subsequence across the inputs")


def _longest_common_window(codes, t: MatchTolerances) -> SubWordCode | None:
    """Longest window of the shortest code that subsets every code."""
    base = min(codes, key=len)
    others = [c for c in codes if c is not base]
    n = len(base.elements)
    for length in range(n, 0, -1):
        for start in range(0, n - length + 1):
            window = base.elements[start : start + length]
            if all(
                subset_alignment(window, c.elements, t) is not None
                for c in others
            ):
                return SubWordCode(tuple(window))
    return None


def build_codebook(
    corpus_dir,
    table: ConnectivityTable,
    sizes,
    cfg: EncoderConfig,
    t: MatchTolerances,
    font: str | None = None,
) -> Codebook:
    """Encode a rendered corpus and isolate per-(glyph, position) codes.

    Missing rasters are skipped (counted); glyphs whose containing specs
    share no common code are flagged instead of entered.
    """
    font = font or os.path.basename(os.path.normpath(str(corpus_dir)))
    book = Codebook(font=font, tolerances=t)
    spec_codes: list[tuple[SubWordSpec, SubWordCode]] = []
    for position in Position:
        pos_dir = os.path.join(str(corpus_dir), position.value)
        if not os.path.isdir(pos_dir):
            continue
        for name in sorted(os.listdir(pos_dir)):
            spec_dir = os.path.join(pos_dir, name)
            if not os.path.isdir(spec_dir):
                continue
            spec = SubWordSpec(tuple(name.split("-")), position)
            codes, used_sizes = [], []
            for size in sizes:
                path = os.path.join(spec_dir, f"{size}.pbm")
                if not os.path.exists(path):
                    book.skipped += 1
                    continue
                word = encode_word(load_image(path), cfg)
                codes.append(_flatten(word))
                used_sizes.append(size)
            if not codes:
                continue
            try:
                common = extract_common_code(codes, used_sizes, t)
            except EmptyCommonError:
                book.flagged.append((spec.target, position.value))
                continue
            spec_codes.append((spec, common))
    # isolate one code per (glyph, position) across the containing specs
    by_target: dict[tuple[str, str], list[SubWordCode]] = {}
    for spec, code in spec_codes:
        by_target.setdefault((spec.target, spec.position.value), []).append(code)
    for (glyph, pos), codes in sorted(by_target.items()):
        if len(codes) == 1:
            common = codes[0]
        else:
            common = _longest_common_window(codes, t)
        if common is None or not common.elements:
            book.flagged.append((glyph, pos))
            continue
        book.entries[(glyph, pos)] = CharacterCode(
            glyph, Position(pos), common
        )
    return book


def build_fingerprints(books, t: MatchTolerances | None = None):
    """Set each font's fingerprint to its codes unique among the books."""
    books = list(books)
    if not books:
        raise ValueError("need at least one codebook")
    for book in books:
        tol = t or book.tolerances
        unique = []
        for cc in book.entries.values():
            clash = any(
                sequence_equiv(cc.code.elements, other_cc.code.elements, tol)
                for other in books
                if other is not book
                for other_cc in other.entries.values()
            )
            if not clash:
                unique.append(cc.code)
        book.fingerprint = unique
    return books


def identify_font(word: WordCode, books, t: MatchTolerances) -> str | None:
    """Font whose fingerprint hits the word most; None on ties or no hits."""
    scores = []
    for book in books:
        hits = sum(len(find_matches(word, code, t)) for code in book.fingerprint)
        scores.append((hits, book.font))
    if not scores:
        return None
    best = max(h for h, _ in scores)
    if best == 0:
        return None
    winners = [f for h, f in scores if h == best]
    if len(winners) != 1:
        return None
    return winners[0]


def _alignments_avoiding(target: SubWordCode, word: WordCode, covered, t):
    """All (si, offset, aligned-index-set) alignments on uncovered elements."""
    out = []
    telems = target.elements
    for si, entry in enumerate(word.subwords):
        delems = entry.code.elements
        free = [i for i in range(len(delems)) if i not in covered[si]]
        if len(free) < len(telems):
            continue
        for j in range(len(delems) - len(telems) + 1):
            if j in covered[si]:
                continue
            align = subset_alignment(telems, delems, t, anchor=j)
            if align is not None and not any(r in covered[si] for r in align):
                out.append((si, j, set(align)))
    return out


def recognize(word: WordCode, book: Codebook, t: MatchTolerances):
    """Greedy cover of the word by codebook entries, longest code first.

    Repeatedly takes the entry with the longest code that still matches
    an uncovered window (earlier windows preferred) and emits the matches
    in window order as (glyph, position, (sub-word index, offset)).
    """
    covered: dict[int, set[int]] = {i: set() for i in range(len(word.subwords))}
    ordered = sorted(
        book.entries.values(),
        key=lambda cc: (-len(cc.code.elements), cc.glyph, cc.position.value),
    )
    results = []
    while True:
        placed = False
        for target_len in sorted(
            {len(cc.code.elements) for cc in ordered}, reverse=True
        ):
            candidates = []
            for cc in ordered:
                if len(cc.code.elements) != target_len:
                    continue
                hits = _alignments_avoiding(cc.code, word, covered, t)
                if hits:
                    si, j, aligned = min(hits, key=lambda h: (h[0], h[1]))
                    candidates.append(((si, j), cc, aligned))
            if candidates:
                (si, j), cc, aligned = min(candidates, key=lambda c: c[0])
                covered[si].update(aligned)
                results.append((cc.glyph, cc.position.value, (si, j)))
                placed = True
                break
        if not placed:
            break
    results.sort(key=lambda r: r[2])
    return results


# ---------------------------------------------------------------------------
# persistence

def _tol_to_obj(t: MatchTolerances):
    return {
        "delta_l": t.dl,
        "delta_alpha": t.dalpha,
        "delta_a": t.da,
        "delta_b": t.db,
        "delta_phi": t.dphi,
        "delta_beta": t.dbeta,
        "delta_gamma": t.dgamma,
        "delta_pt": t.dpt,
    }


def _tol_from_obj(obj) -> MatchTolerances:
    return MatchTolerances(
        dl=float(obj["delta_l"]),
        dalpha=float(obj["delta_alpha"]),
        da=float(obj["delta_a"]),
        db=float(obj["delta_b"]),
        dphi=float(obj["delta_phi"]),
        dbeta=float(obj["delta_beta"]),
        dgamma=float(obj["delta_gamma"]),
        dpt=float(obj["delta_pt"]),
    )


def save_codebook(book: Codebook, path) -> None:
    obj = {
        "schema_version": SCHEMA_VERSION,
        "font": book.font,
        "tolerances": _tol_to_obj(book.tolerances),
        "entries": [
            {
                "glyph": cc.glyph,
                "position": cc.position.value,
                "code": subword_to_obj(cc.code),
            }
            for cc in book.entries.values()
        ],
        "fingerprint": [subword_to_obj(code) for code in book.fingerprint],
        "flagged": [list(f) for f in book.flagged],
        "skipped": book.skipped,
    }
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)


def load_codebook(path) -> Codebook:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CodebookFormatError(f"cannot read codebook: {exc}") from exc
    try:
        if obj["schema_version"] != SCHEMA_VERSION:
            raise CodebookFormatError(
                f"unsupported schema_version {obj['schema_version']!r}"
            )
        book = Codebook(
            font=obj["font"], tolerances=_tol_from_obj(obj["tolerances"])
        )
        for e in obj["entries"]:
            cc = CharacterCode(
                e["glyph"], Position(e["position"]), subword_from_obj(e["code"])
            )
            book.entries[(cc.glyph, cc.position.value)] = cc
        book.fingerprint = [subword_from_obj(c) for c in obj["fingerprint"]]
        book.flagged = [tuple(f) for f in obj.get("flagged", [])]
        book.skipped = int(obj.get("skipped", 0))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CodebookFormatError):
            raise
        raise CodebookFormatError(f"malformed codebook: {exc}") from exc
    return book
