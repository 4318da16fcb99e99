"""Seeded generator of labeled synthetic chat corpora.

The class signal is carried by interaction structure alone. Abusive targets
sit inside pile-on episodes: after the planted message a crowd of users posts
while direct-referencing its author, who keeps replying; the After graph
comes out large (crowd size drawn around abuse_crowd_mean) and fairly
reciprocal. Non-abusive targets live in small episodes whose cast size is
heavy-tailed with most mass below 5 users, under one of three regimes:
one-way burst chains (reciprocity 0), small-group rotation (reciprocity 1)
or recency-biased chatter (intermediate). Message text is either empty or
the name of a referenced user; content never encodes the label.

Every episode spans exactly 200 messages with its target at position 100,
so a 200-message context period (100 past, 99 future) never crosses an
episode boundary even when many episodes share a channel. Channels are
built from independently derived seeds, which makes the corpus a pure
function of the configuration and channel generation order-independent.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, fields, replace

import numpy as np

from .corpus import (Corpus, LABEL_ABUSE, LABEL_NONABUSE, LABEL_UNLABELED,
                     Message)
from .extraction import ExtractionParams, extract

_EPISODE_LEN = 200          # matches the default context budget
_TARGET_POS = 100           # 100 past messages, the target, 99 future
_FUTURE_LEN = _EPISODE_LEN - _TARGET_POS - 1
_WAVE = 5                   # single-post pile-on waves use this size
_PRE_CAST = (14, 20)        # participants in the commotion before an abuse target
_CROWD_MIN = 26
_CROWD_MAX = 60
_SMALL_REGIME_MAX = 6       # casts this small may go one-way or rotation
_EXTREME_EPS = 1e-9


class GenError(ValueError):
    """Invalid generator configuration or input."""


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for the synthetic corpus.

    abuse_crowd_mean/sd shape the After-graph vertex count of abusive
    contexts; abuse_reciprocity_target steers how often pile-on waves come
    back for a second round, which is what moves the After-graph
    reciprocity. The nonabuse_* fields shape the small-episode regime
    mixture and its heavy-tailed cast-size distribution.
    """

    seed: int = 42
    n_channels: int = 24
    users_per_channel: int = 80
    abuse_contexts: int = 600
    nonabuse_contexts: int = 1800
    abuse_crowd_mean: float = 40.0
    abuse_crowd_sd: float = 2.5
    abuse_reciprocity_target: float = 0.7
    nonabuse_size_exponent: float = 1.8
    nonabuse_size_cap: int = 11
    nonabuse_oneway_rate: float = 0.34
    nonabuse_bilateral_rate: float = 0.38
    reply_recency_bias: float = 0.6
    reference_rate: float = 0.6

    def __post_init__(self):
        if self.seed < 0:
            raise GenError(f"seed must be non-negative, got {self.seed}")
        if self.n_channels < 1:
            raise GenError(f"n_channels must be positive, got {self.n_channels}")
        if self.users_per_channel < 2:
            raise GenError("users_per_channel must be at least 2, "
                           f"got {self.users_per_channel}")
        if self.abuse_contexts < 0 or self.nonabuse_contexts < 0:
            raise GenError("context counts must be non-negative")
        if self.abuse_crowd_mean <= 0:
            raise GenError("abuse_crowd_mean must be positive, "
                           f"got {self.abuse_crowd_mean}")
        if self.abuse_crowd_sd < 0:
            raise GenError("abuse_crowd_sd must be non-negative")
        if self.nonabuse_size_exponent <= 1.0:
            raise GenError("nonabuse_size_exponent must exceed 1, "
                           f"got {self.nonabuse_size_exponent}")
        if not 2 <= self.nonabuse_size_cap < self.users_per_channel:
            raise GenError("nonabuse_size_cap must lie in "
                           f"[2, users_per_channel), got {self.nonabuse_size_cap}")
        for name in ("abuse_reciprocity_target", "nonabuse_oneway_rate",
                     "nonabuse_bilateral_rate", "reply_recency_bias",
                     "reference_rate"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise GenError(f"{name} must be in [0, 1], got {v}")
        if self.nonabuse_oneway_rate + self.nonabuse_bilateral_rate > 1.0:
            raise GenError("nonabuse regime rates must sum to at most 1")
        if self.abuse_contexts > 0:
            need = self.abuse_crowd_mean + 2.0 * self.abuse_crowd_sd
            if need > self.users_per_channel:
                raise GenError(
                    f"abuse crowd mean {self.abuse_crowd_mean} exceeds the "
                    f"per-channel user pool ({self.users_per_channel} users)")


def write_config(config: GeneratorConfig, path) -> None:
    """Save a config as flat key = value lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for f in fields(GeneratorConfig):
            fh.write(f"{f.name} = {getattr(config, f.name)!r}\n")


def read_config(path) -> GeneratorConfig:
    """Parse a key = value config file; unknown keys are rejected.

    Missing keys fall back to the defaults, values are coerced to the
    field's declared type, and '#' starts a comment.
    """
    types = {f.name: f.type for f in fields(GeneratorConfig)}
    values: dict[str, object] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise GenError(f"{path}: line {lineno}: expected key = value")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in types:
                raise GenError(f"{path}: line {lineno}: unknown key {key!r}")
            caster = int if types[key] in ("int", int) else float
            try:
                values[key] = caster(val)
            except ValueError:
                raise GenError(f"{path}: line {lineno}: bad value for "
                               f"{key!r}: {val!r}") from None
    return GeneratorConfig(**values)


def write_targets(targets, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for tid, label in targets:
            fh.write(f"{tid}\t{label}\n")


def read_targets(path) -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise GenError(f"{path}: line {lineno}: expected id<TAB>label")
            tid, label = parts
            if label not in (LABEL_ABUSE, LABEL_NONABUSE):
                raise GenError(f"{path}: line {lineno}: bad target label "
                               f"{label!r}")
            out.append((tid, label))
    return out


# mean After-graph reciprocity per palindrome block size, measured on
# default-geometry pile-ons (window 10, recursive weights, crowd near 40);
# size 0 stands for single-post waves
_RECIP_ANCHORS = ((0, 0.272), (2, 0.434), (3, 0.540), (4, 0.554), (6, 0.586),
                  (8, 0.661), (10, 0.735), (12, 0.781), (14, 0.800),
                  (16, 0.810), (20, 0.950), (26, 0.968))


def _block_size_mix(target: float) -> tuple[int, int, float]:
    """Bracketing block sizes whose blend lands reciprocity near target.

    Returns (low size, high size, probability of the high size); targets
    outside the reachable band clamp to the nearest anchor.
    """
    first_s, first_r = _RECIP_ANCHORS[0]
    if target <= first_r:
        return first_s, first_s, 0.0
    for (s1, r1), (s2, r2) in zip(_RECIP_ANCHORS, _RECIP_ANCHORS[1:]):
        if target <= r2:
            return s1, s2, (target - r1) / (r2 - r1)
    last_s, _ = _RECIP_ANCHORS[-1]
    return last_s, last_s, 0.0


def _recent_distinct(authors: list[int], limit: int) -> list[int]:
    out: list[int] = []
    for j in range(len(authors) - 1, -1, -1):
        a = authors[j]
        if a not in out:
            out.append(a)
            if len(out) == limit:
                break
    return out


_SELF_RUN = 0.4             # chance a chatter message continues the author's run


def _mixed_chatter(rng, cast: list[str], length: int,
                   config: GeneratorConfig) -> list[tuple[str, str]]:
    """Recency-biased group chatter; reciprocity lands between the modes.

    Authors often post several messages in a row, which keeps the sliding
    window dominated by few distinct speakers and the resulting graphs
    visibly sparser than a pile-on of the same size.
    """
    k = len(cast)
    idx: list[int] = []
    msgs: list[tuple[str, str]] = []
    for _ in range(length):
        u = rng.random()
        if idx and u < _SELF_RUN:
            a = idx[-1]
        elif idx and u < _SELF_RUN + (1.0 - _SELF_RUN) * config.reply_recency_bias:
            recent = _recent_distinct(idx, 3)
            a = recent[int(rng.integers(len(recent)))]
        else:
            a = int(rng.integers(k))
        text = ""
        if rng.random() < config.reference_rate:
            for j in range(len(idx) - 1, -1, -1):
                if idx[j] != a:
                    text = cast[idx[j]]
                    break
        idx.append(a)
        msgs.append((cast[a], text))
    return msgs


_PARADE_MIN = 7             # casts this large chat in serial one-way bursts
_BLOB_MAX = 4               # free-for-all stays a tiny-cast thing


def _chatter(rng, cast: list[str], length: int,
             config: GeneratorConfig) -> list[tuple[str, str]]:
    """Free-for-all for tiny casts, structured turns for everyone else.

    A recency-driven free-for-all among many users would wire almost
    every pair; real large rooms drift into one-speaker-at-a-time
    stretches instead, so big casts reuse the one-burst-each layout.
    Five or six users chatting for a whole episode saturate into a
    near-clique, the shape the run-up to a pile-on owns, so mid casts
    keep to the round-robin.
    """
    if len(cast) >= _PARADE_MIN:
        return _oneway_chain(rng, cast, length)
    if len(cast) > _BLOB_MAX:
        return _rotation(rng, cast, length, config)
    return _mixed_chatter(rng, cast, length, config)


def _oneway_chain(rng, cast: list[str], length: int) -> list[tuple[str, str]]:
    """Each user posts one burst and never returns; reciprocity is 0."""
    k = len(cast)
    cuts = sorted(int(c) + 1 for c in rng.choice(length - 1, size=k - 1,
                                                 replace=False))
    bounds = [0] + cuts + [length]
    msgs: list[tuple[str, str]] = []
    for j in range(k):
        msgs.extend((cast[j], "") for _ in range(bounds[j + 1] - bounds[j]))
    return msgs


def _rotation(rng, cast: list[str], length: int,
              config: GeneratorConfig) -> list[tuple[str, str]]:
    """Fixed-order rotation; every pair talks both ways, reciprocity 1."""
    order = [cast[int(i)] for i in rng.permutation(len(cast))]
    k = len(order)
    msgs: list[tuple[str, str]] = []
    for t in range(length):
        a = order[t % k]
        text = order[(t - 1) % k] if t and rng.random() < config.reference_rate else ""
        msgs.append((a, text))
    return msgs


def _pile_on(rng, abuser: str, crowd: list[str], length: int,
             config: GeneratorConfig) -> list[tuple[str, str]]:
    """Crowd blocks direct-reference the abuser, who replies after each block.

    All crowd members debut within the first `length` slots, so the After
    graph holds exactly the abuser plus the crowd. A block is either a
    palindrome (its users post in order, then again mirrored, which makes
    every within-block pair bilateral) or a single-post wave whose users
    never return; the block size drawn from the anchor table is the
    reciprocity dial. Oversized blocks are shrunk to waves near the budget
    edge so every debut always fits.
    """
    s_lo, s_hi, p_hi = _block_size_mix(config.abuse_reciprocity_target)
    debut = [crowd[int(i)] for i in rng.permutation(len(crowd))]
    slots: list[tuple[str, str]] = []
    i = 0
    while i < len(debut):
        size = s_hi if rng.random() < p_hi else s_lo
        remaining = len(debut) - i
        take = min(size, remaining)
        rest = remaining - take
        rest_min_cost = rest + -(-rest // _WAVE)
        if size > 0 and len(slots) + 2 * take + 1 + rest_min_cost <= length:
            block = debut[i:i + take]
            i += take
            slots.extend((u, abuser) for u in block)
            slots.extend((u, abuser) for u in reversed(block))
            slots.append((abuser, block[0]))
        else:
            wave = debut[i:i + _WAVE]
            i += len(wave)
            slots.extend((u, abuser) for u in wave)
            slots.append((abuser, wave[-1]))
    pos = 0
    while len(slots) < length:
        size = s_hi if rng.random() < p_hi else s_lo
        take = min(max(size, 2), len(debut))
        block = [debut[(pos + j) % len(debut)] for j in range(take)]
        pos = (pos + take) % len(debut)
        slots.extend((u, abuser) for u in block)
        slots.extend((u, abuser) for u in reversed(block))
        slots.append((abuser, block[0]))
    return slots[:length]


def _abuse_episode(rng, pool: list[str],
                   config: GeneratorConfig) -> list[tuple[str, str]]:
    lo, hi = _PRE_CAST
    size = int(rng.integers(lo, hi + 1))
    cast_idx = rng.choice(len(pool), size=size, replace=False)
    pre_cast = [pool[int(i)] for i in cast_idx]
    abuser = pre_cast[int(rng.integers(size))]
    c = int(round(rng.normal(config.abuse_crowd_mean, config.abuse_crowd_sd)))
    c = max(_CROWD_MIN, min(c, _CROWD_MAX, len(pool) - 1))
    others = [u for u in pool if u != abuser]
    crowd = [others[int(i)] for i in rng.choice(len(others), size=c - 1,
                                                replace=False)]
    # commotion, not a parade: a room about to blow up has everyone
    # talking over each other, so the free-for-all runs at any cast size
    msgs = _mixed_chatter(rng, pre_cast, _TARGET_POS, config)
    msgs.append((abuser, ""))  # the planted target
    msgs.extend(_pile_on(rng, abuser, crowd, _FUTURE_LEN, config))
    return msgs


def _nonabuse_episode(rng, pool: list[str],
                      config: GeneratorConfig) -> list[tuple[str, str]]:
    k = 2 + int(rng.pareto(config.nonabuse_size_exponent - 1.0))
    k = min(k, config.nonabuse_size_cap, len(pool))
    cast = [pool[int(i)] for i in rng.choice(len(pool), size=k, replace=False)]
    if k <= _SMALL_REGIME_MAX:
        u = rng.random()
        if u < config.nonabuse_oneway_rate:
            return _oneway_chain(rng, cast, _EPISODE_LEN)
        if u < config.nonabuse_oneway_rate + config.nonabuse_bilateral_rate:
            return _rotation(rng, cast, _EPISODE_LEN, config)
    return _chatter(rng, cast, _EPISODE_LEN, config)


def _generate_channel(channel: str, n_abuse: int, n_nonabuse: int, seed_child,
                      config: GeneratorConfig):
    """Build one channel's messages and targets from its derived seed."""
    rng = np.random.default_rng(seed_child)
    pool = [f"{channel}u{j:03d}" for j in range(config.users_per_channel)]
    kinds = [LABEL_ABUSE] * n_abuse + [LABEL_NONABUSE] * n_nonabuse
    kinds = [kinds[int(i)] for i in rng.permutation(len(kinds))]
    messages: list[Message] = []
    targets: list[tuple[str, str]] = []
    for kind in kinds:
        if kind == LABEL_ABUSE:
            episode = _abuse_episode(rng, pool, config)
        else:
            episode = _nonabuse_episode(rng, pool, config)
        base = len(messages)
        for off, (author, text) in enumerate(episode):
            seq = base + off
            label = kind if off == _TARGET_POS else LABEL_UNLABELED
            mid = f"{channel}m{seq:06d}"
            messages.append(Message(id=mid, channel=channel, seq=seq,
                                    author=author, label=label, text=text))
            if off == _TARGET_POS:
                targets.append((mid, kind))
    return messages, targets, pool


def generate(config: GeneratorConfig) -> tuple[Corpus, list[tuple[str, str]]]:
    """Build the corpus and its ordered (target id, label) list.

    Episodes are spread over channels round-robin; each channel is produced
    from its own spawned seed, so the result is bit-identical for a given
    config regardless of how channel generation is scheduled. The planted
    abuse targets are the only messages labeled abusive.
    """
    ss = np.random.SeedSequence(config.seed)
    children = ss.spawn(config.n_channels)
    nc = config.n_channels
    channels: dict[str, list[Message]] = {}
    targets: list[tuple[str, str]] = []
    users: set[str] = set()
    for ci in range(nc):
        name = f"ch{ci:03d}"
        n_a = config.abuse_contexts // nc + (1 if ci < config.abuse_contexts % nc else 0)
        n_n = (config.nonabuse_contexts // nc
               + (1 if ci < config.nonabuse_contexts % nc else 0))
        msgs, tgts, pool = _generate_channel(name, n_a, n_n, children[ci], config)
        channels[name] = msgs
        targets.extend(tgts)
        users.update(pool)
    return Corpus(channels=channels, users=frozenset(users)), targets


@dataclass(frozen=True)
class ClassStats:
    """After-graph summary for one class of targets."""

    count: int
    vertex_mean: float
    vertex_median: float
    vertex_min: int
    vertex_max: int
    share_small: float      # fraction of graphs with fewer than 5 vertices
    reciprocity_mean: float
    share_extreme: float    # fraction with reciprocity exactly 0 or 1

    @classmethod
    def from_samples(cls, sizes: list[int], recips: list[float]) -> "ClassStats":
        if not sizes:
            return cls(0, 0.0, 0.0, 0, 0, 0.0, 0.0, 0.0)
        extreme = sum(1 for r in recips
                      if r <= _EXTREME_EPS or r >= 1.0 - _EXTREME_EPS)
        return cls(
            count=len(sizes),
            vertex_mean=float(statistics.fmean(sizes)),
            vertex_median=float(statistics.median(sizes)),
            vertex_min=min(sizes),
            vertex_max=max(sizes),
            share_small=sum(1 for s in sizes if s < 5) / len(sizes),
            reciprocity_mean=float(statistics.fmean(recips)),
            share_extreme=extreme / len(sizes),
        )


@dataclass(frozen=True)
class CalibrationReport:
    """Class-conditional After-graph statistics, optionally vs config targets."""

    abuse: ClassStats
    nonabuse: ClassStats
    crowd_target: float | None = None
    reciprocity_target: float | None = None

    @property
    def empty(self) -> bool:
        return self.abuse.count == 0 and self.nonabuse.count == 0

    def render_text(self) -> str:
        lines = ["calibration report"]
        if self.empty:
            lines.append("  no targets")
            return "\n".join(lines) + "\n"
        for name, st in (("abuse", self.abuse), ("non-abuse", self.nonabuse)):
            lines.append(f"  {name} contexts: {st.count}")
            if st.count == 0:
                continue
            vc = (f"    after vertex count: mean {st.vertex_mean:.2f}, "
                  f"median {st.vertex_median:.1f}, "
                  f"range [{st.vertex_min}, {st.vertex_max}], "
                  f"share below 5 users {st.share_small:.3f}")
            if name == "abuse" and self.crowd_target is not None:
                vc += f" (target mean {self.crowd_target:g})"
            lines.append(vc)
            rc = (f"    after reciprocity: mean {st.reciprocity_mean:.3f}, "
                  f"share at 0 or 1 {st.share_extreme:.3f}")
            if name == "abuse" and self.reciprocity_target is not None:
                rc += f" (target mean {self.reciprocity_target:g})"
            lines.append(rc)
        return "\n".join(lines) + "\n"


def _graph_reciprocity(graph) -> float:
    pairs = {(u, v) for u, v, _ in graph.edges()}
    if not pairs:
        return 0.0
    return sum(1 for (u, v) in pairs if (v, u) in pairs) / len(pairs)


def validate_calibration(corpus: Corpus, targets, params: ExtractionParams,
                         config: GeneratorConfig | None = None) -> CalibrationReport:
    """Measure class-conditional After-graph statistics over the targets.

    Reciprocity is always read off directed extractions, so an undirected
    params value is coerced; vertex counts are unaffected by direction.
    """
    if not params.directed:
        params = replace(params, directed=True)
    sizes: dict[str, list[int]] = {LABEL_ABUSE: [], LABEL_NONABUSE: []}
    recips: dict[str, list[float]] = {LABEL_ABUSE: [], LABEL_NONABUSE: []}
    for tid, label in targets:
        if label not in sizes:
            raise GenError(f"target {tid!r} has label {label!r}, expected "
                           f"{LABEL_ABUSE!r} or {LABEL_NONABUSE!r}")
        context = corpus.context_period(tid, params.context_size)
        after = extract(context, corpus, params).after
        sizes[label].append(after.n)
        recips[label].append(_graph_reciprocity(after))
    return CalibrationReport(
        abuse=ClassStats.from_samples(sizes[LABEL_ABUSE], recips[LABEL_ABUSE]),
        nonabuse=ClassStats.from_samples(sizes[LABEL_NONABUSE],
                                         recips[LABEL_NONABUSE]),
        crowd_target=config.abuse_crowd_mean if config else None,
        reciprocity_target=config.abuse_reciprocity_target if config else None,
    )
