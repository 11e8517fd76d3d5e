"""Independent reference implementations used by the tests."""

from collections import Counter


def coverage_by_millisecond(cues, duration_ms):
    """Label every millisecond by the earliest (start, ordinal) kept cue containing it.

    ``cues`` is a list of (start, end, ordinal, label-or-None); None marks a
    discarded cue. Returns a Counter label -> ms including "None".
    """
    owner = [None] * duration_ms
    rank = [None] * duration_ms
    for start, end, ordinal, label in cues:
        if label is None:
            continue
        for ms in range(start, min(end, duration_ms)):
            if rank[ms] is None or (start, ordinal) < rank[ms]:
                rank[ms] = (start, ordinal)
                owner[ms] = label
    return Counter("None" if o is None else o for o in owner)


def coverage_by_painting(cues, duration_ms):
    """Same semantics as ``coverage_by_millisecond``, vectorized for large runs.

    Cues are painted onto a per-millisecond array from lowest to highest
    priority, so the earliest cue paints last and owns each contested ms.
    """
    import numpy as np

    names = ["None"]
    owner = np.zeros(duration_ms, dtype=np.int32)
    kept = sorted((c for c in cues if c[3] is not None), key=lambda c: (c[0], c[2]), reverse=True)
    for start, end, _ordinal, label in kept:
        if label not in names:
            names.append(label)
        owner[start:min(end, duration_ms)] = names.index(label)
    counts = np.bincount(owner, minlength=len(names))
    return Counter({names[i]: int(n) for i, n in enumerate(counts) if n})
