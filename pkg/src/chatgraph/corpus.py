"""Chat-log corpus model and line-record I/O.

Responsibilities:
  * parse/serialize the tab-separated message format (one message per line:
    id, channel, seq, author, label, text),
  * group messages per channel in seq order and index them by id,
  * resolve whole-token, case-insensitive user references in message text,
  * materialize the symmetric context period around a targeted message.

Everything here is immutable after parsing and safe to share across workers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

LABEL_ABUSE = "A"
LABEL_NONABUSE = "N"
LABEL_UNLABELED = "U"
_VALID_LABELS = (LABEL_ABUSE, LABEL_NONABUSE, LABEL_UNLABELED)

_TOKEN_RE = re.compile(r"[A-Za-z0-9_]+")


class CorpusError(ValueError):
    """Malformed corpus input."""


@dataclass(frozen=True)
class Message:
    """One chat message.

    seq is the message's integer position within its channel and is strictly
    increasing there; author is a non-empty user identifier.
    """

    id: str
    channel: str
    seq: int
    author: str
    label: str
    text: str


@dataclass(frozen=True)
class ContextPeriod:
    """Messages around a target: past + target + future, one channel.

    past and future are chronological; len(past) <= ceil((size-1)/2) and
    len(future) <= floor((size-1)/2), truncated at channel boundaries.
    """

    target: Message
    past: tuple[Message, ...]
    future: tuple[Message, ...]
    requested_size: int

    def messages(self) -> tuple[Message, ...]:
        """All context messages in chronological order."""
        return self.past + (self.target,) + self.future


def escape_text(text: str) -> str:
    """Escape backslashes, tabs and newlines for the line-record format."""
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def unescape_text(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            if nxt == "t":
                out.append("\t")
                i += 2
                continue
            if nxt == "n":
                out.append("\n")
                i += 2
                continue
            if nxt == "\\":
                out.append("\\")
                i += 2
                continue
        out.append(c)
        i += 1
    return "".join(out)


@dataclass
class Corpus:
    """Channel-grouped, seq-sorted chat corpus.

    users holds every known user identifier (declared plus all authors).
    Reference detection and per-message receiver candidates are cached
    lazily; caches are derived data only and never mutate the messages.
    """

    channels: dict[str, list[Message]]
    users: frozenset[str]
    by_id: dict[str, Message] = field(default_factory=dict)
    _position: dict[str, int] = field(default_factory=dict)
    _lower_names: dict[str, str] = field(default_factory=dict)
    _refs_cache: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.by_id:
            for msgs in self.channels.values():
                for pos, m in enumerate(msgs):
                    self.by_id[m.id] = m
                    self._position[m.id] = pos
        if not self._lower_names:
            # sorted so duplicate case-folded names resolve deterministically
            for name in sorted(self.users):
                self._lower_names.setdefault(name.lower(), name)

    @property
    def n_messages(self) -> int:
        return sum(len(m) for m in self.channels.values())

    def message(self, message_id: str) -> Message:
        try:
            return self.by_id[message_id]
        except KeyError:
            raise CorpusError(f"unknown message id: {message_id!r}") from None

    def context_period(self, target_id: str, size: int) -> ContextPeriod:
        """Context of up to `size` messages centered on the target.

        The budget includes the target itself: up to ceil((size-1)/2)
        messages immediately before it and floor((size-1)/2) after it,
        truncated at the channel boundaries.
        """
        if size < 1:
            raise CorpusError(f"context size must be >= 1, got {size}")
        target = self.message(target_id)
        msgs = self.channels[target.channel]
        pos = self._position[target_id]
        n_past = (size - 1 + 1) // 2  # ceil((size-1)/2)
        n_future = (size - 1) // 2
        past = tuple(msgs[max(0, pos - n_past):pos])
        future = tuple(msgs[pos + 1:pos + 1 + n_future])
        return ContextPeriod(target=target, past=past, future=future,
                             requested_size=size)

    def references(self, message: Message) -> tuple[str, ...]:
        """Users whose names occur in the text as whole tokens.

        Matching is case-insensitive and delimiter-bounded; the result is
        ordered by first occurrence, excludes the author, and has no
        duplicates. Cached per message id.
        """
        cached = self._refs_cache.get(message.id)
        if cached is not None:
            return cached
        refs = detect_references(message, self.users, self._lower_names)
        self._refs_cache[message.id] = refs
        return refs


def detect_references(message: Message, users: frozenset[str] | set[str],
                      lower_names: dict[str, str] | None = None) -> tuple[str, ...]:
    """Ordered whole-token user references in a message's text.

    Args:
        message: the message to scan.
        users: known user identifiers.
        lower_names: optional precomputed case-fold map (lowercased -> name).

    Returns:
        Canonical user names in first-occurrence order, author excluded,
        without duplicates.
    """
    if lower_names is None:
        lower_names = {}
        for name in sorted(users):
            lower_names.setdefault(name.lower(), name)
    author_low = message.author.lower()
    seen: set[str] = set()
    out: list[str] = []
    for tok in _TOKEN_RE.finditer(message.text):
        low = tok.group(0).lower()
        if low == author_low or low in seen:
            continue
        name = lower_names.get(low)
        if name is not None:
            seen.add(low)
            out.append(name)
    return tuple(out)


def parse_corpus(stream, declared_users=()) -> Corpus:
    """Parse the line-record corpus format.

    Args:
        stream: iterable of text lines, a str, or a bytes object.
        declared_users: optional extra user names (sidecar user list).

    Raises:
        CorpusError: malformed line (named by line number), duplicate
            (channel, seq), empty author, or bad label.
    """
    if isinstance(stream, bytes):
        stream = stream.decode("utf-8")
    if isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = [ln.rstrip("\n") for ln in stream]

    channels: dict[str, list[Message]] = {}
    seen_seq: dict[tuple[str, int], str] = {}
    seen_ids: set[str] = set()
    authors: set[str] = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            raise CorpusError(
                f"line {lineno}: expected 6 tab-separated fields, got {len(parts)}")
        mid, channel, seq_s, author, label, text = parts
        if not mid:
            raise CorpusError(f"line {lineno}: empty message id")
        if mid in seen_ids:
            raise CorpusError(f"line {lineno}: duplicate message id {mid!r}")
        try:
            seq = int(seq_s)
        except ValueError:
            raise CorpusError(f"line {lineno}: seq is not an integer: {seq_s!r}") from None
        if not author:
            raise CorpusError(f"line {lineno}: empty author")
        if label not in _VALID_LABELS:
            raise CorpusError(f"line {lineno}: unknown label {label!r}")
        key = (channel, seq)
        if key in seen_seq:
            raise CorpusError(
                f"line {lineno}: duplicate seq {seq} in channel {channel!r}")
        seen_seq[key] = mid
        seen_ids.add(mid)
        authors.add(author)
        channels.setdefault(channel, []).append(
            Message(id=mid, channel=channel, seq=seq, author=author,
                    label=label, text=unescape_text(text)))

    for msgs in channels.values():
        msgs.sort(key=lambda m: m.seq)
    users = frozenset(authors) | frozenset(declared_users)
    return Corpus(channels=channels, users=users)


def parse_corpus_file(path, users_path=None) -> Corpus:
    declared: tuple[str, ...] = ()
    if users_path is not None:
        with open(users_path, encoding="utf-8") as fh:
            declared = tuple(ln.strip() for ln in fh if ln.strip())
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh, declared_users=declared)


def write_corpus(corpus: Corpus, path) -> None:
    """Serialize a corpus back to the line-record format.

    Channels are written in sorted channel-name order, messages in seq order,
    so output bytes are a pure function of corpus content.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for channel in sorted(corpus.channels):
            for m in corpus.channels[channel]:
                fh.write("\t".join((m.id, m.channel, str(m.seq), m.author,
                                    m.label, escape_text(m.text))) + "\n")
