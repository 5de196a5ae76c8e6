"""Praat TextGrid reading/writing (long and short text forms).

Only interval tiers are returned; point tiers are skipped. Labels are
preserved verbatim, including empty silence labels.
"""

import math
import re
from dataclasses import dataclass

from ..errors import ParseError

_TIME_EPS = 1e-9


@dataclass(frozen=True)
class Interval:
    label: str
    xmin: float
    xmax: float

    def __post_init__(self):
        if not self.xmin < self.xmax:
            raise ValueError(f"interval must have xmin < xmax: {self}")

    @property
    def duration(self) -> float:
        return self.xmax - self.xmin


@dataclass(frozen=True)
class IntervalTier:
    name: str
    intervals: tuple

    def __post_init__(self):
        prev = None
        for iv in self.intervals:
            if iv.xmin < 0:
                raise ValueError(f"negative xmin in tier {self.name!r}: {iv}")
            if prev is not None and iv.xmin < prev.xmax - _TIME_EPS:
                raise ValueError(f"overlapping intervals in tier {self.name!r}")
            prev = iv

    @property
    def xmin(self) -> float:
        return self.intervals[0].xmin if self.intervals else 0.0

    @property
    def xmax(self) -> float:
        return self.intervals[-1].xmax if self.intervals else 0.0

    def __len__(self):
        return len(self.intervals)


class _Lines:
    """Cursor over non-blank lines keeping original 1-based line numbers."""

    def __init__(self, content: str):
        self.items = [
            (i, line.strip())
            for i, line in enumerate(content.splitlines(), start=1)
            if line.strip()
        ]
        self.pos = 0

    def exhausted(self) -> bool:
        return self.pos >= len(self.items)

    @property
    def lineno(self) -> int:
        if self.exhausted():
            return self.items[-1][0] if self.items else 0
        return self.items[self.pos][0]

    def peek(self) -> str:
        return "" if self.exhausted() else self.items[self.pos][1]

    def next(self, what: str) -> str:
        if self.exhausted():
            raise ParseError(f"unexpected end of file, expected {what}", self.lineno)
        lineno, text = self.items[self.pos]
        self.pos += 1
        return text


def _unquote(text: str, lineno: int) -> str:
    text = text.strip()
    if len(text) < 2 or not (text.startswith('"') and text.endswith('"')):
        raise ParseError(f"expected quoted string, got {text!r}", lineno)
    return text[1:-1].replace('""', '"')


def _parse_number(text: str, lineno: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"expected a number, got {text!r}", lineno) from None


def parse_textgrid(content: str) -> list:
    """Parse a TextGrid blob into its interval tiers.

    Raises ParseError (with the offending line number) on malformed input,
    including intervals violating xmin < xmax, overlaps, or negative times.
    """
    lines = _Lines(content)
    header = lines.next("file type header")
    if "ooTextFile" not in header:
        raise ParseError(f"not a TextGrid file: {header!r}", lines.lineno)
    object_class = lines.next("object class header")
    if "TextGrid" not in object_class:
        raise ParseError(f"not a TextGrid object: {object_class!r}", lines.lineno)
    if any("xmin" in text for _, text in lines.items[lines.pos :]):
        return _parse_long(lines)
    return _parse_short(lines)


_KEY_RE = re.compile(r"^([a-zA-Z?]+(?:\s*:\s*size)?)\s*=\s*(.*)$")


def _long_value(lines: _Lines, key: str) -> str:
    lineno = lines.lineno
    text = lines.next(f"{key} = ...")
    match = _KEY_RE.match(text)
    if not match or not match.group(1).replace(" ", "").startswith(key):
        raise ParseError(f"expected {key!r} entry, got {text!r}", lineno)
    return match.group(2).strip()


def _parse_long(lines: _Lines) -> list:
    _long_value(lines, "xmin")
    _long_value(lines, "xmax")
    if "tiers?" not in lines.peek():
        raise ParseError(f"expected tiers? flag, got {lines.peek()!r}", lines.lineno)
    has_tiers = "<exists>" in lines.next("tiers? flag")
    if not has_tiers:
        return []
    size = int(_parse_number(_long_value(lines, "size"), lines.lineno))
    if lines.peek().startswith("item"):
        lines.next("item []: header")
    tiers = []
    for _ in range(size):
        if not lines.peek().startswith("item"):
            raise ParseError(f"expected item header, got {lines.peek()!r}", lines.lineno)
        lines.next("item [n]: header")
        tier_class = _unquote(_long_value(lines, "class"), lines.lineno)
        name = _unquote(_long_value(lines, "name"), lines.lineno)
        _long_value(lines, "xmin")
        _long_value(lines, "xmax")
        if tier_class == "IntervalTier":
            count_line = lines.lineno
            count = int(_parse_number(_long_value(lines, "intervals"), count_line))
            tiers.append(_read_long_intervals(lines, name, count))
        elif tier_class == "TextTier":
            count = int(_parse_number(_long_value(lines, "points"), lines.lineno))
            for _ in range(count):
                lines.next("points [n]: header")
                _long_value(lines, "number")
                _long_value(lines, "mark")
        else:
            raise ParseError(f"unknown tier class {tier_class!r}", lines.lineno)
    return tiers


def _read_long_intervals(lines: _Lines, name: str, count: int) -> IntervalTier:
    intervals = []
    for _ in range(count):
        if not lines.peek().startswith("intervals"):
            raise ParseError(
                f"expected intervals [n]: header, got {lines.peek()!r}", lines.lineno
            )
        lines.next("intervals [n]: header")
        xmin = _parse_number(_long_value(lines, "xmin"), lines.lineno)
        end_line = lines.lineno
        xmax = _parse_number(_long_value(lines, "xmax"), end_line)
        text_line = lines.lineno
        label = _unquote(_long_value(lines, "text"), text_line)
        _check_interval(xmin, xmax, intervals, end_line)
        intervals.append(Interval(label, xmin, xmax))
    return IntervalTier(name, tuple(intervals))


def _parse_short(lines: _Lines) -> list:
    _parse_number(lines.next("global xmin"), lines.lineno)
    _parse_number(lines.next("global xmax"), lines.lineno)
    flag = lines.next("tiers? flag")
    if "<exists>" not in flag:
        return []
    size = int(_parse_number(lines.next("tier count"), lines.lineno))
    tiers = []
    for _ in range(size):
        tier_class = _unquote(lines.next("tier class"), lines.lineno)
        name = _unquote(lines.next("tier name"), lines.lineno)
        _parse_number(lines.next("tier xmin"), lines.lineno)
        _parse_number(lines.next("tier xmax"), lines.lineno)
        count = int(_parse_number(lines.next("entry count"), lines.lineno))
        if tier_class == "IntervalTier":
            intervals = []
            for _ in range(count):
                xmin = _parse_number(lines.next("interval xmin"), lines.lineno)
                end_line = lines.lineno
                xmax = _parse_number(lines.next("interval xmax"), end_line)
                label = _unquote(lines.next("interval label"), lines.lineno)
                _check_interval(xmin, xmax, intervals, end_line)
                intervals.append(Interval(label, xmin, xmax))
            tiers.append(IntervalTier(name, tuple(intervals)))
        elif tier_class == "TextTier":
            for _ in range(count):
                lines.next("point time")
                lines.next("point mark")
        else:
            raise ParseError(f"unknown tier class {tier_class!r}", lines.lineno)
    return tiers


def _check_interval(xmin: float, xmax: float, previous: list, lineno: int) -> None:
    if xmin < 0:
        raise ParseError(f"negative interval start {xmin}", lineno)
    if not xmin < xmax:
        raise ParseError(f"interval has xmax <= xmin ({xmin} .. {xmax})", lineno)
    if previous and xmin < previous[-1].xmax - _TIME_EPS:
        raise ParseError(
            f"interval starting at {xmin} overlaps previous ending at "
            f"{previous[-1].xmax}",
            lineno,
        )


def _quote(text: str) -> str:
    return '"' + text.replace('"', '""') + '"'


def format_textgrid(tiers, xmin=None, xmax=None) -> str:
    """Serialize interval tiers to the long text form (times to 12 digits)."""
    tiers = list(tiers)
    if xmin is None:
        xmin = min((t.xmin for t in tiers if len(t)), default=0.0)
    if xmax is None:
        xmax = max((t.xmax for t in tiers if len(t)), default=0.0)
    out = [
        'File type = "ooTextFile"',
        'Object class = "TextGrid"',
        "",
        f"xmin = {xmin:.12g}",
        f"xmax = {xmax:.12g}",
        "tiers? <exists>",
        f"size = {len(tiers)}",
        "item []:",
    ]
    for t, tier in enumerate(tiers, start=1):
        out += [
            f"    item [{t}]:",
            '        class = "IntervalTier"',
            f"        name = {_quote(tier.name)}",
            f"        xmin = {tier.xmin:.12g}",
            f"        xmax = {tier.xmax:.12g}",
            f"        intervals: size = {len(tier)}",
        ]
        for i, iv in enumerate(tier.intervals, start=1):
            out += [
                f"        intervals [{i}]:",
                f"            xmin = {iv.xmin:.12g}",
                f"            xmax = {iv.xmax:.12g}",
                f"            text = {_quote(iv.label)}",
            ]
    return "\n".join(out) + "\n"


def intervals_to_frame_durations(tier: IntervalTier, sample_rate: int, hop_length: int) -> list:
    """Convert interval times to per-phoneme frame counts.

    Each boundary is rounded to its nearest frame index, so durations
    telescope: contiguous intervals sum exactly to the rounded total.
    """

    def frame(seconds: float) -> int:
        return int(math.floor(seconds * sample_rate / hop_length + 0.5))

    return [frame(iv.xmax) - frame(iv.xmin) for iv in tier.intervals]
