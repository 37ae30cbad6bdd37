"""Reference schedules whose measured communication is compared against the bounds.

Sequential generators return (events, inputs, outputs) for simulate_cache;
parallel generators return (events, input_placement, output_placement,
balance_groups) for simulate_parallel.  All addresses are colon-joined
strings; partial sums and products get fresh addresses so the
no-recomputation rule has stable identities.  Accumulation coefficients are
implicit in the weighted adds and do not affect data movement.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from typing import Sequence

from ..combinatorics import (
    ContractionSpec,
    count_multisets,
    enumerate_increasing,
    merge_sorted,
    partitions,
    tuple_rank,
)
from ..contraction import ContractionKind, classify, correction_plan
from .cache import Event


def _ranges(total: int, step: int) -> list[range]:
    if step < 1:
        raise ValueError("block must be >= 1")
    return [range(lo, min(lo + step, total)) for lo in range(0, total, step)]


# --- sequential: blocked matrix multiplication --------------------------------


def mm_addresses(m: int, n: int, k: int) -> tuple[list[str], list[str]]:
    inputs = [f"A:{i}:{l}" for i in range(m) for l in range(k)]
    inputs += [f"B:{l}:{j}" for l in range(k) for j in range(n)]
    outputs = [f"C:{i}:{j}" for i in range(m) for j in range(n)]
    return inputs, outputs


def mm_block_for(cache_size: int) -> int:
    """Largest block edge whose two operand tiles, output tile, and transients fit."""
    return max(1, math.isqrt(max(1, (cache_size - 2) // 3)))


def schedule_blocked_mm(m: int, n: int, k: int, block: int):
    """Classic three-loop blocked schedule; valid for H >= 3*block^2 + 2."""
    events: list[Event] = []
    for ib in _ranges(m, block):
        for jb in _ranges(n, block):
            partial: dict[tuple[int, int], tuple[str | None, int]] = {
                (i, j): (None, 0) for i in ib for j in jb
            }
            for lb in _ranges(k, block):
                loaded = [f"A:{i}:{l}" for i in ib for l in lb]
                loaded += [f"B:{l}:{j}" for l in lb for j in jb]
                for addr in loaded:
                    events.append(("L", addr))
                for i in ib:
                    for j in jb:
                        prev, cnt = partial[(i, j)]
                        for l in lb:
                            last = cnt + 1 == k
                            if prev is None:
                                out = f"C:{i}:{j}" if last else f"t:{i}:{j}:{l}"
                                events.append(
                                    ("C", out, (f"A:{i}:{l}", f"B:{l}:{j}"), "mul")
                                )
                                prev = out
                            else:
                                t = f"t:{i}:{j}:{l}"
                                events.append(
                                    ("C", t, (f"A:{i}:{l}", f"B:{l}:{j}"), "mul")
                                )
                                out = f"C:{i}:{j}" if last else f"c:{i}:{j}:{cnt}"
                                events.append(("C", out, (prev, t), "add"))
                                events.append(("E", prev))
                                events.append(("E", t))
                                prev = out
                            cnt += 1
                        partial[(i, j)] = (prev, cnt)
                for addr in loaded:
                    events.append(("E", addr))
            for i in ib:
                for j in jb:
                    events.append(("S", f"C:{i}:{j}"))
                    events.append(("E", f"C:{i}:{j}"))
    inputs, outputs = mm_addresses(m, n, k)
    return events, inputs, outputs


# --- sequential: blocked packed contraction (direct algorithm) -----------------


def schedule_blocked_direct(spec: ContractionSpec, block: int):
    """Blocks the packed unfolded product over ranked index ranges.

    One multiplication per (j, l, k) triple of increasing tuples; output
    partial sums are flushed to memory between tiles and reloaded, so cache
    residency stays near 3*block^2.
    """
    n, s, t, v = spec.n, spec.s, spec.t, spec.v
    jspace = enumerate_increasing(n, s)
    lspace = enumerate_increasing(n, t)
    kspace = enumerate_increasing(n, v)
    a_rank = {}
    b_rank = {}

    total: dict[int, int] = {}
    for j in jspace:
        for l in lspace:
            hr = tuple_rank(merge_sorted(j, l), n)
            total[hr] = total.get(hr, 0) + len(kspace)

    # chain: hr -> [current addr or None, contributions done, generation]
    chain: dict[int, list] = {hr: [None, 0, 0] for hr in total}
    stored_partial: set[int] = set()
    events: list[Event] = []
    single_block = block >= max(len(jspace), len(lspace), len(kspace))

    for jb in _ranges(len(jspace), block):
        for lb in _ranges(len(lspace), block):
            tile_chains = sorted(
                {tuple_rank(merge_sorted(jspace[ji], lspace[li]), n) for ji in jb for li in lb}
            )
            for hr in tile_chains:
                if hr in stored_partial:
                    events.append(("L", chain[hr][0]))
                    stored_partial.discard(hr)
            for kb in _ranges(len(kspace), block):
                loaded: list[str] = []
                seen: set[str] = set()
                for ji in jb:
                    for ki in kb:
                        key = merge_sorted(jspace[ji], kspace[ki])
                        addr = f"A:{a_rank.setdefault(key, tuple_rank(key, n))}"
                        if addr not in seen:
                            seen.add(addr)
                            loaded.append(addr)
                for li in lb:
                    for ki in kb:
                        key = merge_sorted(kspace[ki], lspace[li])
                        addr = f"B:{b_rank.setdefault(key, tuple_rank(key, n))}"
                        if addr not in seen:
                            seen.add(addr)
                            loaded.append(addr)
                for addr in loaded:
                    events.append(("L", addr))
                for ji in jb:
                    for li in lb:
                        hr = tuple_rank(merge_sorted(jspace[ji], lspace[li]), n)
                        st = chain[hr]
                        for ki in kb:
                            a_addr = f"A:{tuple_rank(merge_sorted(jspace[ji], kspace[ki]), n)}"
                            b_addr = f"B:{tuple_rank(merge_sorted(kspace[ki], lspace[li]), n)}"
                            last = st[1] + 1 == total[hr]
                            if st[0] is None:
                                out = f"C:{hr}" if last else f"t:{ji}:{li}:{ki}"
                                events.append(("C", out, (a_addr, b_addr), "mul"))
                                st[0] = out
                            else:
                                tmp = f"t:{ji}:{li}:{ki}"
                                events.append(("C", tmp, (a_addr, b_addr), "mul"))
                                st[2] += 1
                                out = f"C:{hr}" if last else f"zc:{hr}:{st[2]}"
                                events.append(("C", out, (st[0], tmp), "add"))
                                events.append(("E", st[0]))
                                events.append(("E", tmp))
                                st[0] = out
                            st[1] += 1
                if not single_block:
                    for addr in loaded:
                        events.append(("E", addr))
            for hr in tile_chains:
                st = chain[hr]
                if st[1] == total[hr]:
                    events.append(("S", st[0]))
                    events.append(("E", st[0]))
                    st[0] = "done"
                elif not single_block and st[0] is not None:
                    events.append(("S", st[0]))
                    events.append(("E", st[0]))
                    stored_partial.add(hr)

    inputs = [f"A:{r}" for r in range(count_multisets(n, s + v))]
    inputs += [f"B:{r}" for r in range(count_multisets(n, v + t))]
    outputs = [f"C:{hr}" for hr in sorted(total)]
    return events, inputs, outputs


def direct_block_for(cache_size: int) -> int:
    """Block edge so that two operand tiles, the output tile, and transients fit."""
    return max(1, math.isqrt(max(1, (cache_size - 2) // 3)))


# --- sequential: symmetry preserving traversal ---------------------------------


class _ChainPool:
    """Output partial sums under a residency budget with LRU flushing.

    Chain partials may share one address (several chains based on the same
    product before their first fold), so cached addresses are refcounted and
    evicted only when the last holder lets go.  In no-spill mode (everything
    fits) nothing is flushed and completed accumulations stay cached.
    """

    def __init__(
        self,
        events: list,
        budget: int,
        totals: dict[int, int],
        final_name,
        spill: bool,
    ):
        self.events = events
        self.budget = max(1, budget)
        self.totals = totals
        self.final_name = final_name
        self.spill = spill
        self.state: dict[int, list] = {hr: [None, 0, 0] for hr in totals}
        self.resident: OrderedDict[int, None] = OrderedDict()
        self.stored: set[int] = set()
        self.finished: set[int] = set()
        self.cached: dict[str, int] = {}

    def hold(self, addr: str) -> None:
        self.cached[addr] = self.cached.get(addr, 0) + 1

    def release(self, addr: str) -> None:
        cnt = self.cached[addr] - 1
        if cnt:
            self.cached[addr] = cnt
        else:
            del self.cached[addr]
            self.events.append(("E", addr))

    def _make_room(self) -> None:
        if not self.spill:
            return
        while len(self.resident) >= self.budget:
            victim = next(iter(self.resident))
            self.resident.pop(victim)
            addr = self.state[victim][0]
            self.events.append(("S", addr))
            self.stored.add(victim)
            self.release(addr)

    def touch(self, hr: int) -> None:
        if hr in self.resident:
            self.resident.move_to_end(hr)
            return
        self._make_room()
        if hr in self.stored:
            addr = self.state[hr][0]
            if addr in self.cached:
                self.hold(addr)
            else:
                self.events.append(("L", addr))
                self.cached[addr] = 1
            self.stored.discard(hr)
        self.resident[hr] = None

    def contribute(self, hr: int, term: str) -> None:
        """Fold a cached term into the chain; the caller keeps its own hold on term."""
        st = self.state[hr]
        self.touch(hr)
        last = st[1] + 1 == self.totals[hr]
        if st[0] is None:
            st[0] = term  # the term doubles as the chain base, readable in place
            self.hold(term)
        else:
            st[2] += 1
            out = self.final_name(hr) if last else f"zp:{hr}:{st[2]}"
            self.events.append(("C", out, (st[0], term), "add"))
            self.release(st[0])
            st[0] = out
            self.cached[out] = 1
        st[1] += 1
        if last:
            self.resident.pop(hr, None)
            self.finished.add(hr)
            if self.spill or st[0].startswith("C:"):
                self.events.append(("S", st[0]))
            if self.spill:
                self.release(st[0])
                self.stored.add(hr)

    def base_only_on(self, hr: int, addr: str) -> bool:
        st = self.state[hr]
        return hr not in self.finished and st[2] == 0 and st[0] == addr

    def rebase_stored(self, hr: int) -> None:
        """Mark a base-holding chain as flushed; its base value is now in memory."""
        self.resident.pop(hr, None)
        self.stored.add(hr)


def schedule_sympres_seq(spec: ContractionSpec, block: int, chain_budget: int | None = None):
    """Traverse increasing omega-tuples in ranked blocks: load the operand
    projections a block needs, take one product per tuple, scatter it into the
    output accumulations, then run the correction products.

    Partial sums are never shared between distinct accumulations (each chain
    folds its own fresh addresses), matching the no-reuse assumption under
    which the symmetry preserving bounds are stated.
    """
    if classify(spec) == ContractionKind.DEGENERATE:
        return schedule_blocked_direct(spec, block)
    n, s, t, v = spec.n, spec.s, spec.t, spec.v
    ispace = enumerate_increasing(n, spec.omega)
    plan = correction_plan(spec)

    corr_targets: dict[int, int] = {}
    for hr, _, _ in plan.accums:
        corr_targets[hr] = corr_targets.get(hr, 0) + 1

    z_total: dict[int, int] = {}
    consumers: list[list[int]] = []
    a_need: list[list[int]] = []
    b_need: list[list[int]] = []
    for i in ispace:
        cons = sorted({tuple_rank(h, n) for h, _ in partitions(i, s + t, v, distinct=True)})
        consumers.append(cons)
        for hr in cons:
            z_total[hr] = z_total.get(hr, 0) + 1
        a_need.append(
            sorted({tuple_rank(j, n) for j, _ in partitions(i, s + v, t, distinct=True)})
        )
        b_need.append(
            sorted({tuple_rank(l, n) for l, _ in partitions(i, v + t, s, distinct=True)})
        )

    def z_final(hr: int) -> str:
        # outputs untouched by the correction close directly to their final name
        return f"C:{hr}" if corr_targets.get(hr, 0) == 0 else f"Z:{hr}"

    events: list[Event] = []
    single_block = block >= len(ispace)
    spill = not single_block
    if chain_budget is None:
        # same residency share as the block's operand loads
        chain_budget = block * (math.comb(spec.omega, t) + math.comb(spec.omega, s))
    chains = _ChainPool(
        events, chain_budget if spill else len(z_total) + 1, z_total, z_final, spill
    )

    for blk in _ranges(len(ispace), block):
        loaded: list[str] = []
        seen: set[str] = set()
        for ii in blk:
            for r in a_need[ii]:
                addr = f"A:{r}"
                if addr not in seen:
                    seen.add(addr)
                    loaded.append(addr)
            for r in b_need[ii]:
                addr = f"B:{r}"
                if addr not in seen:
                    seen.add(addr)
                    loaded.append(addr)
        for addr in loaded:
            events.append(("L", addr))
        for ii in blk:
            ir = tuple_rank(ispace[ii], n)

            def fold(side: str, ranks: list[int]) -> str:
                if len(ranks) == 1:
                    return f"{side}:{ranks[0]}"
                cur = f"{side}:{ranks[0]}"
                for g, r in enumerate(ranks[1:]):
                    nxt = f"{side.lower()}h:{ir}:{g}"
                    events.append(("C", nxt, (cur, f"{side}:{r}"), "add"))
                    if g:
                        events.append(("E", cur))
                    cur = nxt
                return cur

            a_root = fold("A", a_need[ii])
            b_root = fold("B", b_need[ii])
            cons = consumers[ii]
            if len(cons) == 1 and z_total[cons[0]] == 1:
                # sole product of a sole consumer: the multiplication writes the
                # accumulation result outright (always the case when v = 0)
                hr = cons[0]
                out = z_final(hr)
                events.append(("C", out, (a_root, b_root), "mul"))
                if spill or out.startswith("C:"):
                    events.append(("S", out))
                if spill or out.startswith("C:"):
                    events.append(("E", out))
                else:
                    chains.cached[out] = 1  # kept for the correction stage
                chains.state[hr][0] = out
                chains.state[hr][1] = 1
                chains.finished.add(hr)
                z_addr = None
            else:
                z_addr = f"zh:{ir}"
                events.append(("C", z_addr, (a_root, b_root), "mul"))
                chains.hold(z_addr)
            for root in (a_root, b_root):
                if root.startswith(("ah:", "bh:")):
                    events.append(("E", root))
            if z_addr is not None:
                for hr in cons:
                    chains.contribute(hr, z_addr)
                if spill:
                    holders = [hr for hr in cons if chains.base_only_on(hr, z_addr)]
                    if holders:
                        events.append(("S", z_addr))
                        for hr in holders:
                            chains.release(z_addr)
                            chains.rebase_stored(hr)
                chains.release(z_addr)
        if spill:
            for addr in loaded:
                events.append(("E", addr))

    # correction stage: products folded into the stored (or still cached) accumulations
    if plan.products:
        prod_addr: list[str] = []
        prod_uses = [0] * len(plan.products)
        for _, idx, _ in plan.accums:
            prod_uses[idx] += 1
        cached_inputs: set[str] = set()
        if not spill:
            cached_inputs |= {f"A:{r}" for r in range(count_multisets(n, s + v))}
            cached_inputs |= {f"B:{r}" for r in range(count_multisets(n, v + t))}

        for pi, prod in enumerate(plan.products):
            scratch: list[str] = []
            for r, _ in prod.a_combo:
                addr = f"A:{r}"
                if addr not in cached_inputs:
                    events.append(("L", addr))
                    cached_inputs.add(addr)
                    scratch.append(addr)
            for r, _ in prod.b_combo:
                addr = f"B:{r}"
                if addr not in cached_inputs:
                    events.append(("L", addr))
                    cached_inputs.add(addr)
                    scratch.append(addr)

            def fold_combo(side: str, combo) -> str:
                ranks = [r for r, _ in combo]
                if len(ranks) == 1:
                    return f"{side}:{ranks[0]}"
                cur = f"{side}:{ranks[0]}"
                for g, r in enumerate(ranks[1:]):
                    nxt = f"{side.lower()}w:{pi}:{g}"
                    events.append(("C", nxt, (cur, f"{side}:{r}"), "add"))
                    if g:
                        events.append(("E", cur))
                    cur = nxt
                return cur

            a_root = fold_combo("A", prod.a_combo)
            b_root = fold_combo("B", prod.b_combo)
            w_addr = f"w:{pi}"
            events.append(("C", w_addr, (a_root, b_root), "mul"))
            prod_addr.append(w_addr)
            for root in (a_root, b_root):
                if root.startswith(("aw:", "bw:")):
                    events.append(("E", root))
            if spill:
                events.append(("S", w_addr))
                events.append(("E", w_addr))
                for addr in scratch:
                    events.append(("E", addr))
                    cached_inputs.discard(addr)

        remaining: dict[int, int] = {}
        for hr, _, _ in plan.accums:
            remaining[hr] = remaining.get(hr, 0) + 1
        gen: dict[int, int] = {}
        current: dict[int, str] = {}
        for hr, idx, _ in plan.accums:
            if hr not in current:
                if spill:
                    events.append(("L", f"Z:{hr}"))
                current[hr] = f"Z:{hr}"
                gen[hr] = 0
            if spill:
                events.append(("L", prod_addr[idx]))
            last = remaining[hr] == 1
            out = f"C:{hr}" if last else f"cp:{hr}:{gen[hr]}"
            events.append(("C", out, (current[hr], prod_addr[idx]), "add"))
            events.append(("E", current[hr]))
            prod_uses[idx] -= 1
            if spill or prod_uses[idx] == 0:
                events.append(("E", prod_addr[idx]))
            current[hr] = out
            gen[hr] += 1
            remaining[hr] -= 1
            if last:
                events.append(("S", out))
                events.append(("E", out))

    inputs = [f"A:{r}" for r in range(count_multisets(n, s + v))]
    inputs += [f"B:{r}" for r in range(count_multisets(n, v + t))]
    outputs = [f"C:{hr}" for hr in sorted(z_total)]
    return events, inputs, outputs


def sympres_block_for(spec: ContractionSpec, cache_size: int) -> tuple[int, int]:
    """(block, chain_budget) so operand loads, chains, and transients all fit."""
    w = spec.omega
    per_tuple = max(1, math.comb(w, spec.t) + math.comb(w, spec.s))
    slack = w + 4
    block = max(1, (cache_size - slack) // (2 * per_tuple))
    budget = max(1, cache_size - slack - block * per_tuple)
    return block, budget


def schedule_sympres_for_cache(spec: ContractionSpec, cache_size: int):
    """Convenience wrapper sizing the traversal for a given cache."""
    block, budget = sympres_block_for(spec, cache_size)
    return schedule_sympres_seq(spec, block, chain_budget=budget)


# --- parallel: matrix multiplication grids -------------------------------------


def _mm_elements(m: int, n: int, k: int):
    a = [(i, l) for i in range(m) for l in range(k)]
    b = [(l, j) for l in range(k) for j in range(n)]
    c = [(i, j) for i in range(m) for j in range(n)]
    return a, b, c


def schedule_mm_3d(m: int, n: int, k: int, p: int):
    """Owner-computes blocks on a cubic processor grid with a C reduction."""
    p1 = round(p ** (1 / 3))
    if p1**3 != p:
        raise ValueError(f"3d grid needs a cube processor count, got {p}")
    if m % p1 or n % p1 or k % p1:
        raise ValueError(f"3d grid {p1}^3 does not divide dims ({m},{n},{k})")
    bm, bn, bk = m // p1, n // p1, k // p1

    def proc(qi, qj, ql):
        return (qi * p1 + qj) * p1 + ql

    a_elems, b_elems, c_elems = _mm_elements(m, n, k)
    input_placement = {}
    for i, l in a_elems:
        spread = ((i % bm) * bk + (l % bk)) % p1
        input_placement[f"A:{i}:{l}"] = proc(i // bm, spread, l // bk)
    for l, j in b_elems:
        spread = ((l % bk) * bn + (j % bn)) % p1
        input_placement[f"B:{l}:{j}"] = proc(spread, j // bn, l // bk)
    output_placement = {}
    c_owner_l = {}
    for i, j in c_elems:
        spread = ((i % bm) * bn + (j % bn)) % p1
        c_owner_l[(i, j)] = spread
        output_placement[f"C:{i}:{j}"] = proc(i // bm, j // bn, spread)

    events: list[Event] = []
    for i, l in a_elems:
        owner = input_placement[f"A:{i}:{l}"]
        for qj in range(p1):
            dst = proc(i // bm, qj, l // bk)
            if dst != owner:
                events.append(("SND", f"A:{i}:{l}", owner, dst))
    for l, j in b_elems:
        owner = input_placement[f"B:{l}:{j}"]
        for qi in range(p1):
            dst = proc(qi, j // bn, l // bk)
            if dst != owner:
                events.append(("SND", f"B:{l}:{j}", owner, dst))

    for qi in range(p1):
        for qj in range(p1):
            for ql in range(p1):
                q = proc(qi, qj, ql)
                for i in range(qi * bm, (qi + 1) * bm):
                    for j in range(qj * bn, (qj + 1) * bn):
                        reduced = p1 > 1
                        prev = None
                        for cnt, l in enumerate(range(ql * bk, (ql + 1) * bk)):
                            last = cnt + 1 == bk
                            local_final = (
                                f"pp:{q}:{i}:{j}" if reduced else f"C:{i}:{j}"
                            )
                            if prev is None:
                                out = local_final if last else f"t:{q}:{i}:{j}:{l}"
                                events.append(
                                    ("CMP", q, out, (f"A:{i}:{l}", f"B:{l}:{j}"), "mul")
                                )
                            else:
                                tmp = f"t:{q}:{i}:{j}:{l}"
                                events.append(
                                    ("CMP", q, tmp, (f"A:{i}:{l}", f"B:{l}:{j}"), "mul")
                                )
                                out = local_final if last else f"pc:{q}:{i}:{j}:{cnt}"
                                events.append(("CMP", q, out, (prev, tmp), "add"))
                            prev = out
    if p1 > 1:
        for i, j in c_elems:
            owner_l = c_owner_l[(i, j)]
            qown = proc(i // bm, j // bn, owner_l)
            cur = f"pp:{qown}:{i}:{j}"
            cnt = 0
            for ql in range(p1):
                if ql == owner_l:
                    continue
                src = proc(i // bm, j // bn, ql)
                events.append(("SND", f"pp:{src}:{i}:{j}", src, qown))
                cnt += 1
                out = f"C:{i}:{j}" if cnt == p1 - 1 else f"rc:{qown}:{i}:{j}:{cnt}"
                events.append(("CMP", qown, out, (cur, f"pp:{src}:{i}:{j}"), "add"))
                cur = out

    groups = {
        "A": [f"A:{i}:{l}" for i, l in a_elems],
        "B": [f"B:{l}:{j}" for l, j in b_elems],
    }
    return events, input_placement, output_placement, groups


def schedule_mm_2d(m: int, n: int, k: int, p: int):
    """Owner-computes C blocks on a 2-d grid; operand panels are gathered."""
    best = None
    for p1 in range(1, p + 1):
        if p % p1:
            continue
        p2 = p // p1
        if m % p1 or n % p2:
            continue
        score = abs(math.log(p1 / p2) - math.log(m / n))
        if best is None or score < best[0]:
            best = (score, p1, p2)
    if best is None:
        raise ValueError(f"no 2d grid of {p} procs divides dims ({m},{n})")
    _, p1, p2 = best
    bm, bn = m // p1, n // p2

    def proc(qi, qj):
        return qi * p2 + qj

    a_elems, b_elems, c_elems = _mm_elements(m, n, k)
    input_placement = {}
    for i, l in a_elems:
        spread = ((i % bm) * k + l) % p2
        input_placement[f"A:{i}:{l}"] = proc(i // bm, spread)
    for l, j in b_elems:
        spread = (l * bn + (j % bn)) % p1
        input_placement[f"B:{l}:{j}"] = proc(spread, j // bn)
    output_placement = {f"C:{i}:{j}": proc(i // bm, j // bn) for i, j in c_elems}

    events: list[Event] = []
    for i, l in a_elems:
        owner = input_placement[f"A:{i}:{l}"]
        for qj in range(p2):
            dst = proc(i // bm, qj)
            if dst != owner:
                events.append(("SND", f"A:{i}:{l}", owner, dst))
    for l, j in b_elems:
        owner = input_placement[f"B:{l}:{j}"]
        for qi in range(p1):
            dst = proc(qi, j // bn)
            if dst != owner:
                events.append(("SND", f"B:{l}:{j}", owner, dst))
    for qi in range(p1):
        for qj in range(p2):
            q = proc(qi, qj)
            for i in range(qi * bm, (qi + 1) * bm):
                for j in range(qj * bn, (qj + 1) * bn):
                    prev = None
                    for cnt, l in enumerate(range(k)):
                        last = cnt + 1 == k
                        if prev is None:
                            out = f"C:{i}:{j}" if last else f"t:{q}:{i}:{j}:{l}"
                            events.append(
                                ("CMP", q, out, (f"A:{i}:{l}", f"B:{l}:{j}"), "mul")
                            )
                        else:
                            tmp = f"t:{q}:{i}:{j}:{l}"
                            events.append(
                                ("CMP", q, tmp, (f"A:{i}:{l}", f"B:{l}:{j}"), "mul")
                            )
                            out = f"C:{i}:{j}" if last else f"pc:{q}:{i}:{j}:{cnt}"
                            events.append(("CMP", q, out, (prev, tmp), "add"))
                        prev = out
    groups = {
        "A": [f"A:{i}:{l}" for i, l in a_elems],
        "B": [f"B:{l}:{j}" for l, j in b_elems],
    }
    return events, input_placement, output_placement, groups


def schedule_mm_1d(m: int, n: int, k: int, p: int):
    """Contraction-dimension split: local partials of all of C, then a reduction."""
    if k % p:
        raise ValueError(f"1d split needs p | k, got k={k}, p={p}")
    bk = k // p
    a_elems, b_elems, c_elems = _mm_elements(m, n, k)
    input_placement = {f"A:{i}:{l}": l // bk for i, l in a_elems}
    input_placement.update({f"B:{l}:{j}": l // bk for l, j in b_elems})
    output_placement = {f"C:{i}:{j}": (i * n + j) % p for i, j in c_elems}

    events: list[Event] = []
    for q in range(p):
        for i, j in c_elems:
            reduced = p > 1
            prev = None
            for cnt, l in enumerate(range(q * bk, (q + 1) * bk)):
                last = cnt + 1 == bk
                local_final = f"pp:{q}:{i}:{j}" if reduced else f"C:{i}:{j}"
                if prev is None:
                    out = local_final if last else f"t:{q}:{i}:{j}:{l}"
                    events.append(("CMP", q, out, (f"A:{i}:{l}", f"B:{l}:{j}"), "mul"))
                else:
                    tmp = f"t:{q}:{i}:{j}:{l}"
                    events.append(("CMP", q, tmp, (f"A:{i}:{l}", f"B:{l}:{j}"), "mul"))
                    out = local_final if last else f"pc:{q}:{i}:{j}:{cnt}"
                    events.append(("CMP", q, out, (prev, tmp), "add"))
                prev = out
    if p > 1:
        for i, j in c_elems:
            qown = (i * n + j) % p
            cur = f"pp:{qown}:{i}:{j}"
            cnt = 0
            for q in range(p):
                if q == qown:
                    continue
                events.append(("SND", f"pp:{q}:{i}:{j}", q, qown))
                cnt += 1
                out = f"C:{i}:{j}" if cnt == p - 1 else f"rc:{qown}:{i}:{j}:{cnt}"
                events.append(("CMP", qown, out, (cur, f"pp:{q}:{i}:{j}"), "add"))
                cur = out
    groups = {
        "A": [f"A:{i}:{l}" for i, l in a_elems],
        "B": [f"B:{l}:{j}" for l, j in b_elems],
    }
    return events, input_placement, output_placement, groups


PARALLEL_GRIDS = {"1d": schedule_mm_1d, "2d": schedule_mm_2d, "3d": schedule_mm_3d}
