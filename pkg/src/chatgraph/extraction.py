"""Before/After/Full graph extraction around a targeted message.

The procedure: slide a window of the current message plus up to W-1
immediately preceding messages over each of three sequences (Before =
past + target, After = target + future, Full = everything); at each step
build the receiver list (direct references first, then the other window
authors by recency of last post), assign rank weights with the chosen
strategy, and accumulate author -> receiver edges.

Weight strategies over a receiver list of length N (ranks i = 1..N):
  * uniform:    1/N
  * linear:     2(N+1-i) / (N(N+1))  (decreasing, sums to 1)
  * recursive:  0.6 * 0.4^(i-1) for i < N, and 0.4^(N-1) for i = N
                (each rank takes 60% of the remaining mass; telescopes to 1)

A `linear_printed` variant (N-i)/sum_j(j) is kept for comparison; its ranks
sum to (N-1)/(N+1), not 1, so it is not used by default.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import ContextPeriod, Corpus, Message
from .graph import ConversationalGraph

UNIFORM = "uniform"
LINEAR = "linear"
RECURSIVE = "recursive"
LINEAR_PRINTED = "linear_printed"
STRATEGIES = (UNIFORM, LINEAR, RECURSIVE, LINEAR_PRINTED)

DEFAULT_MAX_WINDOW = 19


class ExtractionError(ValueError):
    pass


@dataclass(frozen=True)
class ExtractionParams:
    """Sliding-window parameters.

    window_size counts messages, current one included; 1 <= W <= max_window.
    context_size is the total message budget around (and including) the
    target; it is consumed by callers that cut the context themselves,
    extract() receives an already-cut period.
    """

    window_size: int = 10
    strategy: str = RECURSIVE
    directed: bool = True
    context_size: int = 200
    max_window: int = DEFAULT_MAX_WINDOW

    def __post_init__(self):
        if not 1 <= self.window_size <= self.max_window:
            raise ExtractionError(
                f"window size must be in [1, {self.max_window}], "
                f"got {self.window_size}")
        if self.strategy not in STRATEGIES:
            raise ExtractionError(f"unknown strategy: {self.strategy!r}")
        if self.context_size < 1:
            raise ExtractionError(
                f"context size must be positive, got {self.context_size}")


@dataclass(frozen=True)
class GraphTriple:
    before: ConversationalGraph
    after: ConversationalGraph
    full: ConversationalGraph

    def by_name(self, name: str) -> ConversationalGraph:
        return {"before": self.before, "after": self.after,
                "full": self.full}[name]


def score(strategy: str, i: int, n: int) -> float:
    """Weight of receiver rank i in a list of length n.

    Raises:
        ExtractionError: rank out of range or unknown strategy.
    """
    if n < 1 or not 1 <= i <= n:
        raise ExtractionError(f"rank {i} out of range for list length {n}")
    if strategy == UNIFORM:
        return 1.0 / n
    if strategy == LINEAR:
        return 2.0 * (n + 1 - i) / (n * (n + 1))
    if strategy == RECURSIVE:
        if i < n:
            return 0.6 * 0.4 ** (i - 1)
        return 0.4 ** (n - 1)
    if strategy == LINEAR_PRINTED:
        if n == 1:
            return 1.0  # degenerate: the plain form gives rank 1 weight 0
        return (n - i) / (n * (n + 1) / 2.0)
    raise ExtractionError(f"unknown strategy: {strategy!r}")


def scores(strategy: str, n: int) -> list[float]:
    """All rank weights for a list of length n."""
    return [score(strategy, i, n) for i in range(1, n + 1)]


def receiver_list(window: list[Message], references: tuple[str, ...]) -> list[str]:
    """Ordered receivers of the window's last message.

    Direct references come first in first-mention order; the remaining window
    authors follow by recency of their last post (most recent first). The
    current author is removed and duplicates keep their highest rank.
    """
    current = window[-1]
    author = current.author
    out: list[str] = []
    seen: set[str] = set()
    for name in references:
        if name != author and name not in seen:
            seen.add(name)
            out.append(name)
    for msg in reversed(window[:-1]):
        a = msg.author
        if a != author and a not in seen:
            seen.add(a)
            out.append(a)
    return out


def _build_graph(messages: tuple[Message, ...], corpus: Corpus,
                 params: ExtractionParams) -> ConversationalGraph:
    g = ConversationalGraph(directed=params.directed)
    w = params.window_size
    for k, msg in enumerate(messages):
        g.add_vertex(msg.author)
        window = list(messages[max(0, k - (w - 1)):k + 1])
        recv = receiver_list(window, corpus.references(msg))
        n = len(recv)
        for i, name in enumerate(recv, start=1):
            g.add_weight(msg.author, name, score(params.strategy, i, n))
    return g.freeze()


def extract(context: ContextPeriod, corpus: Corpus,
            params: ExtractionParams) -> GraphTriple:
    """Build the Before/After/Full graphs of a context period.

    Each graph is extracted from its own message sequence with an
    independent window warm-up (the first messages of a sequence see
    windows shorter than W; there is no padding).
    """
    before_msgs = context.past + (context.target,)
    after_msgs = (context.target,) + context.future
    full_msgs = context.messages()
    return GraphTriple(
        before=_build_graph(before_msgs, corpus, params),
        after=_build_graph(after_msgs, corpus, params),
        full=_build_graph(full_msgs, corpus, params),
    )
