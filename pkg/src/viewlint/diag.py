"""Bug reports, bug paths, output rendering, and the verify harness.

A report carries the warning plus an ordered bug path of notes: the
point where the view/pointer obtained its referent, the branches taken,
the invalidation, and the use itself.  The verify harness checks
`expected-warning` / `expected-note {{...}}` comment directives against
the produced diagnostics (substring match, `@-N` shifts the expected
line N lines up).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .ast import SourceLocation
from .lexer import Trivia
from .state import Region
from .values import Symbol

USE_AFTER_FREE = "UseAfterFree"
STACK_USE_AFTER_RETURN = "StackUseAfterReturn"


@dataclass(frozen=True)
class PathNote:
    kind: str  # "event" or "control"
    message: str
    loc: SourceLocation


@dataclass(frozen=True)
class BugReport:
    checker: str
    category: str
    message: str
    loc: SourceLocation
    path: tuple[PathNote, ...] = ()


@dataclass(frozen=True)
class NoteTag:
    """Checker-recorded milestone attached to an exploded node."""

    kind: str  # "assoc", "release", "control"
    message: str
    loc: SourceLocation
    regions: frozenset[Region] = frozenset()
    symbols: frozenset[Symbol] = frozenset()


@dataclass(frozen=True)
class Finding:
    """A checker's raw report before the bug path is attached.

    Findings are sinks: the path that produced one is not explored
    further.
    """

    checker: str
    category: str
    message: str
    loc: SourceLocation
    regions: frozenset[Region] = frozenset()
    symbols: frozenset[Symbol] = frozenset()


def build_bug_path(sink_node, finding: Finding) -> tuple[PathNote, ...]:
    """Walk predecessors from the sink and assemble the bug path.

    Keeps the latest association note for the culprit region/symbol,
    the invalidation note that released it (if any), and the branch
    notes taken after the association.  The final note restates the
    warning at its location.
    """

    def relevant(tag: NoteTag) -> bool:
        return bool(tag.regions & finding.regions) or bool(tag.symbols & finding.symbols)

    back_tags: list[tuple[int, NoteTag]] = []
    node = sink_node
    position = 0
    while node is not None:
        for tag in reversed(node.tags):
            back_tags.append((position, tag))
            position += 1
        node = node.preds[0] if node.preds else None

    release: Optional[tuple[int, NoteTag]] = None
    assoc: Optional[tuple[int, NoteTag]] = None
    controls: list[tuple[int, NoteTag]] = []
    for pos, tag in back_tags:
        if tag.kind == "control":
            controls.append((pos, tag))
        elif tag.kind == "release" and release is None and relevant(tag):
            release = (pos, tag)
        elif tag.kind == "assoc" and assoc is None and relevant(tag):
            assoc = (pos, tag)
            break

    chosen: list[tuple[int, NoteTag]] = []
    if assoc is not None:
        chosen.append(assoc)
        chosen.extend((pos, t) for pos, t in controls if pos < assoc[0])
    else:
        chosen.extend(controls)
    if release is not None:
        chosen.append(release)
    chosen.sort(key=lambda pt: -pt[0])  # execution order

    notes = [PathNote("control" if t.kind == "control" else "event", t.message, t.loc) for _, t in chosen]
    notes.append(PathNote("event", finding.message, finding.loc))
    return tuple(notes)


def deduplicate(reports: Iterable[BugReport]) -> list[BugReport]:
    """Merge reports with identical (checker, message, location); the
    shortest bug path wins.  Output is deterministically ordered."""
    best: dict[tuple, BugReport] = {}
    for r in reports:
        key = (r.checker, r.message, r.loc)
        old = best.get(key)
        if old is None or len(r.path) < len(old.path):
            best[key] = r
    return sorted(best.values(), key=lambda r: (r.loc.file, r.loc.line, r.loc.column, r.checker))


# --------------------------------------------------------------------------
# Rendering


def render_text(reports: list[BugReport]) -> str:
    lines: list[str] = []
    for r in reports:
        lines.append(f"{r.loc}: warning: {r.message} [{r.checker}]")
        for note in r.path:
            lines.append(f"  {note.loc}: note: {note.message}")
    return "\n".join(lines) + ("\n" if lines else "")


def render_json(reports: list[BugReport]) -> str:
    payload = {
        "reports": [
            {
                "checker": r.checker,
                "category": r.category,
                "message": r.message,
                "file": r.loc.file,
                "line": r.loc.line,
                "col": r.loc.column,
                "path": [
                    {
                        "kind": note.kind,
                        "message": note.message,
                        "line": note.loc.line,
                        "col": note.loc.column,
                    }
                    for note in r.path
                ],
            }
            for r in reports
        ]
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_json_reports(text: str) -> list[BugReport]:
    data = json.loads(text)
    out = []
    for item in data["reports"]:
        loc = SourceLocation(item["file"], item["line"], item["col"])
        path = tuple(
            PathNote(n["kind"], n["message"], SourceLocation(item["file"], n["line"], n["col"]))
            for n in item["path"]
        )
        out.append(BugReport(item["checker"], item["category"], item["message"], loc, path))
    return out


# --------------------------------------------------------------------------
# Verify harness


@dataclass(frozen=True)
class Directive:
    kind: str  # "warning" or "note"
    line: int  # anchored line (directive line minus the @-N shift)
    pattern: str
    loc: SourceLocation


class DirectiveError(Exception):
    def __init__(self, message: str, loc: SourceLocation):
        super().__init__(f"{loc}: {message}")
        self.loc = loc


_DIRECTIVE_RE = re.compile(r"expected-(warning|note)(?:@(-\d+))?\s*\{\{(.*?)\}\}")
_DIRECTIVE_WORD_RE = re.compile(r"expected-(?:warning|note)\b")


def parse_directives(trivia: list[Trivia]) -> list[Directive]:
    directives: list[Directive] = []
    for comment in trivia:
        matches = list(_DIRECTIVE_RE.finditer(comment.text))
        mentions = _DIRECTIVE_WORD_RE.findall(comment.text)
        if len(mentions) != len(matches):
            raise DirectiveError("malformed test directive", comment.loc)
        for m in matches:
            kind = m.group(1)
            shift = int(m.group(2)) if m.group(2) else 0
            if m.group(2) and shift >= 0:
                raise DirectiveError("directive line shift must be @-N with N >= 1", comment.loc)
            directives.append(Directive(kind, comment.loc.line + shift, m.group(3), comment.loc))
    return directives


@dataclass
class VerifyResult:
    passed: bool
    missing: list[Directive] = field(default_factory=list)
    unexpected: list[tuple[str, int, str]] = field(default_factory=list)

    def describe(self) -> list[str]:
        lines = []
        for d in self.missing:
            lines.append(f"  missing: expected-{d.kind} @ line {d.line} {{{{{d.pattern}}}}}")
        for kind, line, message in self.unexpected:
            lines.append(f"  unexpected: {kind} @ line {line}: {message}")
        return lines


def verify(trivia: list[Trivia], reports: list[BugReport]) -> VerifyResult:
    """Match directives against diagnostics; both directions must agree.

    Every directive must match a distinct diagnostic of the same kind on
    the anchored line whose message contains the pattern, and every
    diagnostic must be matched by some directive.
    """
    directives = parse_directives(trivia)

    actuals: list[tuple[str, int, str]] = []
    for r in reports:
        actuals.append(("warning", r.loc.line, r.message))
        for note in r.path:
            actuals.append(("note", note.loc.line, note.message))

    matched = [False] * len(actuals)
    missing: list[Directive] = []
    for d in directives:
        for i, (kind, line, message) in enumerate(actuals):
            if matched[i]:
                continue
            if kind == d.kind and line == d.line and d.pattern in message:
                matched[i] = True
                break
        else:
            missing.append(d)

    unexpected = [a for a, ok in zip(actuals, matched) if not ok]
    return VerifyResult(passed=not missing and not unexpected, missing=missing, unexpected=unexpected)
