"""Spine shift analysis: which forward shifts of a spined sum extend to
self-embeddings, whether the component sequence is eventually self-similar,
and where the forward-invariant origin vertex sits.

A strict period k means component n embeds in component n+k for every
n >= 0; gluing those component embeddings over the spine map n -> n+k gives
a genuine self-embedding that moves the distinguished end's ray forward by
k.  An eventual period holds only from some offset u on.  A term is almost
rigid (path-aligned) when no strict period exists: no spine-aligned
self-embedding moves the spine.

Regularity asks whether the components fall into finitely many equimorphy
classes.  Certificates:

* periodic sequences are regular outright;
* a generated sequence is regular if some stage is equimorphic to a later
  one (the context preserves equimorphy in both directions, so the classes
  cycle from there on);
* a generated sequence is irregular if an embedding-monotone measure
  (vertex count, height, or branch count under a branching hole) strictly
  increases stage over stage: the stages are then pairwise non-equimorphic.

Everything is tri-valued; unknown marks the analysis horizon, never a
guess.
"""

from __future__ import annotations

import json

from .terms import (
    NO,
    UNKNOWN,
    YES,
    Generated,
    INF,
    OMEGA_MULT,
    Patched,
    Periodic,
    Term,
    TermError,
    WSum,
    branch_count,
    embeds,
    equimorphic,
    height,
    is_single_vertex,
    root_degree,
    spine_address,
    stage,
    tri_and,
    vertex_count,
)


class OriginUndefined(TermError):
    pass


class ShiftReport:
    __slots__ = (
        "periods",
        "d",
        "eventual",
        "almost_rigid",
        "regular",
        "origin_index",
        "origin_error",
        "notes",
    )

    def __init__(self, periods, d, eventual, almost_rigid, regular, origin_index, origin_error, notes):
        self.periods = tuple(periods)
        self.d = d
        self.eventual = dict(eventual)
        self.almost_rigid = almost_rigid
        self.regular = regular
        self.origin_index = origin_index
        self.origin_error = origin_error
        self.notes = tuple(notes)

    def to_json(self) -> str:
        return json.dumps(
            {
                "periods": list(self.periods),
                "d": self.d,
                "eventual": {str(k): u for k, u in sorted(self.eventual.items())},
                "almost_rigid": self.almost_rigid,
                "regular": self.regular,
                "origin": f"spine[{self.origin_index}]" if self.origin_index is not None else None,
                "origin_error": self.origin_error,
                "notes": list(self.notes),
            }
        )


def _strict_period(seq, k, memo) -> str:
    """Does component n embed in component n+k for every n >= 0?"""
    if isinstance(seq, Periodic):
        window = len(seq.prefix) + _cyc(seq)
        return tri_and(
            *(embeds(stage(seq, n), stage(seq, n + k), _memo=memo) for n in range(window + 1))
        )
    if isinstance(seq, Generated):
        # stage 0 into stage k is necessary (n = 0) and sufficient: applying
        # the context n times carries it to every later pair
        return embeds(stage(seq, 0), stage(seq, k), _memo=memo)
    if isinstance(seq, Patched):
        last = max((n for n, _ in seq.patches), default=-1)
        head = tri_and(
            *(
                embeds(stage(seq, n), stage(seq, n + k), _memo=memo)
                for n in range(last + k + 1)
            )
        )
        if head == NO:
            return NO
        tail = _strict_period_from(seq.inner, last + k + 1, k, memo)
        return tri_and(head, tail)
    raise TermError(f"bad sequence {seq!r}")


def _strict_period_from(seq, start, k, memo) -> str:
    if isinstance(seq, Periodic):
        window = len(seq.prefix) + _cyc(seq)
        return tri_and(
            *(
                embeds(stage(seq, n), stage(seq, n + k), _memo=memo)
                for n in range(start, start + window + 1)
            )
        )
    if isinstance(seq, Generated):
        # a verified pair at u <= start propagates through the context to
        # every n >= u; a failure refutes only when checked at start itself
        u = min(start, 4)
        verdict = embeds(stage(seq, u), stage(seq, u + k), _memo=memo)
        if verdict == YES:
            return YES
        if verdict == NO and u == start:
            return NO
        return UNKNOWN
    raise TermError(f"bad sequence {seq!r}")


def _eventual_period(seq, k, memo, u_max):
    """Least u <= u_max with component n embedding in component n+k for all
    n >= u, or None."""
    for u in range(u_max + 1):
        if _holds_from(seq, u, k, memo) == YES:
            return u
    return None


def _holds_from(seq, u, k, memo) -> str:
    if isinstance(seq, Periodic):
        window = len(seq.prefix) + _cyc(seq)
        return tri_and(
            *(
                embeds(stage(seq, n), stage(seq, n + k), _memo=memo)
                for n in range(u, u + window + 1)
            )
        )
    if isinstance(seq, Generated):
        # one verified pair propagates forward through the context
        return embeds(stage(seq, u), stage(seq, u + k), _memo=memo)
    if isinstance(seq, Patched):
        last = max((n for n, _ in seq.patches), default=-1)
        head = tri_and(
            *(
                embeds(stage(seq, n), stage(seq, n + k), _memo=memo)
                for n in range(u, max(last + k + 1, u))
            )
        )
        if head == NO:
            return NO
        tail = _holds_from(seq.inner, max(last + k + 1, u), k, memo)
        return tri_and(head, tail)
    raise TermError(f"bad sequence {seq!r}")


def _cyc(seq: Periodic) -> int:
    return len(seq.cycle)


def regular_components(seq) -> tuple[str, str]:
    """(verdict, reason): do the components fall into finitely many
    equimorphy classes?"""
    if isinstance(seq, Periodic):
        return YES, "finitely many component terms"
    if isinstance(seq, Patched):
        verdict, reason = regular_components(seq.inner)
        return verdict, reason + " (finitely many overrides)"
    if isinstance(seq, Generated):
        for p in range(1, 4):
            if equimorphic(stage(seq, 0), stage(seq, p)) == YES:
                return YES, f"stage 0 equimorphic to stage {p}; classes cycle"
        growth = _growth_certificate(seq)
        if growth:
            return NO, growth
        return UNKNOWN, "no equimorphy cycle or growth certificate found"
    raise TermError(f"bad sequence {seq!r}")


def _growth_certificate(seq: Generated):
    """A reason string when stages are certifiably pairwise non-equimorphic."""
    v = [vertex_count(stage(seq, j)) for j in range(2)]
    if INF not in v and v[1] > v[0]:
        return "stage vertex counts grow strictly (affine recurrence)"
    hd = seq.context.hole_depth()
    if hd >= 1:
        h = [height(stage(seq, j)) for j in range(3)]
        if INF not in h and h[1] == hd + h[0] and h[2] == hd + h[1]:
            return "stage heights grow strictly (hole at positive depth)"
    if seq.context.hole_under_sup_branch():
        b = [branch_count(stage(seq, j)) for j in range(5)]
        if (
            all(x is not None and x != INF for x in b[2:])
            and b[2] < b[3] < b[4]
            and not is_single_vertex(stage(seq, 2))
        ):
            return "branch counts grow strictly (hole under a branching join)"
    return None


def _almost_rigid(seq, periods_yes, periods_no, periods_unknown, horizon):
    """Tri-valued: no strict period at all?"""
    if periods_yes:
        return NO
    if isinstance(seq, Periodic):
        # verdicts for k beyond the horizon repeat those of k mod cycle
        # once k clears the prefix, so the scanned range is exhaustive
        if not periods_unknown and horizon >= len(seq.prefix) + 2 * _cyc(seq):
            return YES
        return UNKNOWN
    if isinstance(seq, Generated):
        if periods_unknown:
            return UNKNOWN
        # stage 0 cannot embed into any later stage when its root degree
        # exceeds the fixed root degree of all later stages
        d0 = root_degree(stage(seq, 0))
        if seq.context.hole_depth() >= 1:
            d1 = root_degree(stage(seq, 1))
            if d1 != "w" and (d0 == "w" or d0 > d1):
                return YES
        return UNKNOWN
    if isinstance(seq, Patched):
        if periods_unknown:
            return UNKNOWN
        inner = seq.inner
        last = max((n for n, _ in seq.patches), default=-1)
        if isinstance(inner, Periodic) and horizon >= last + 1 + len(inner.prefix) + 2 * _cyc(inner):
            # beyond the overrides the verdict is periodic in k, so the
            # scanned shift range is exhaustive
            return YES
        return UNKNOWN
    raise TermError(f"bad sequence {seq!r}")


def shift_report(t: Term, horizon: int = 8) -> ShiftReport:
    if not isinstance(t, WSum):
        raise TermError("shift analysis needs a spined sum at the root")
    seq = t.seq
    memo = {}
    notes = []
    yes, no, unk = [], [], []
    for k in range(1, horizon + 1):
        verdict = _strict_period(seq, k, memo)
        (yes if verdict == YES else no if verdict == NO else unk).append(k)
    if unk:
        notes.append(f"strict periods undecided at {unk}")
    d = yes[0] if yes else None
    u_max = _offset_bound(seq, horizon)
    eventual = {}
    for k in range(1, horizon + 1):
        u = _eventual_period(seq, k, memo, u_max)
        if u is not None:
            eventual[k] = u
    rigid = _almost_rigid(seq, yes, no, unk, horizon)
    regular, reason = regular_components(seq)
    notes.append(f"regular: {reason}")
    origin_index, origin_error = _origin(seq, regular, eventual, memo, u_max)
    return ShiftReport(yes, d, eventual, rigid, regular, origin_index, origin_error, notes)


def _offset_bound(seq, horizon):
    if isinstance(seq, Periodic):
        return len(seq.prefix) + 2 * _cyc(seq)
    if isinstance(seq, Patched):
        last = max((n for n, _ in seq.patches), default=-1)
        return last + 1 + _offset_bound(seq.inner, horizon)
    return max(4, horizon // 2)


def _origin(seq, regular, eventual, memo, u_max):
    """Least spine index u from which the component sequence is equimorphy
    periodic: component y equimorphic to component y+d for all y >= u."""
    if regular == NO:
        return None, "components fall into infinitely many equimorphy classes"
    if regular == UNKNOWN:
        return None, "regularity of the component sequence is undecided"
    if not eventual:
        return None, "no eventual period found within the horizon"
    for d in sorted(eventual):
        for u in range(u_max + 1):
            if _equi_from(seq, u, d, memo) == YES:
                return u, None
    return None, "no equimorphy period found within the horizon"


def _equi_from(seq, u, d, memo) -> str:
    """Component y equimorphic to component y+d for all y >= u?"""
    if isinstance(seq, Periodic):
        window = len(seq.prefix) + _cyc(seq)
        return tri_and(
            *(
                tri_and(
                    embeds(stage(seq, y), stage(seq, y + d), _memo=memo),
                    embeds(stage(seq, y + d), stage(seq, y), _memo=memo),
                )
                for y in range(u, u + window + 1)
            )
        )
    if isinstance(seq, Generated):
        # equimorphy of one stage pair propagates through the context
        return tri_and(
            embeds(stage(seq, u), stage(seq, u + d), _memo=memo),
            embeds(stage(seq, u + d), stage(seq, u), _memo=memo),
        )
    if isinstance(seq, Patched):
        last = max((n for n, _ in seq.patches), default=-1)
        head = tri_and(
            *(
                tri_and(
                    embeds(stage(seq, y), stage(seq, y + d), _memo=memo),
                    embeds(stage(seq, y + d), stage(seq, y), _memo=memo),
                )
                for y in range(u, max(last + d + 1, u))
            )
        )
        if head == NO:
            return NO
        return tri_and(head, _equi_from(seq.inner, max(last + d + 1, u), d, memo))
    raise TermError(f"bad sequence {seq!r}")


def origin_vertex(t: Term, horizon: int = 8):
    """Address of the forward-invariant origin: the first spine vertex from
    which the component sequence is equimorphy periodic."""
    report = shift_report(t, horizon)
    if report.origin_index is None:
        raise OriginUndefined(report.origin_error)
    return spine_address(report.origin_index)


def almost_rigid_path_aligned(t: Term, horizon: int = 8) -> str:
    return shift_report(t, horizon).almost_rigid
