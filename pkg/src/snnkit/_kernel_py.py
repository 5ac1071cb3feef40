"""Pure-Python simulation kernel.

Fallback implementation used when the compiled extension is unavailable.
Both kernels execute the identical algorithm over exact integer-pair
rationals, so traces are byte-for-byte interchangeable between backends.

The step loop is event-driven: a regular neuron is only examined when it can
possibly change state or fire, i.e. when a delivery arrives, on the step
after it fired (reset may re-trigger it when reset >= threshold), or always
when its threshold is zero. Idle decay is applied lazily as leak**dt on the
next touch, which is exact and order-independent.
"""

from heapq import heappop, heappush
from math import gcd

VERDICT_NONE = 0
VERDICT_ACCEPT = 1
VERDICT_REJECT = 2
VERDICT_AMBIGUOUS = 3


class Kernel:
    """Synchronous stepper over a compiled network plan."""

    __slots__ = (
        "n", "kinds", "tn", "td", "rn", "rd", "mn", "md", "scheds", "out",
        "accept_idx", "reject_idx", "gadget", "t", "un", "ud", "last",
        "carry", "bucket", "heap", "expl_pos", "energy", "payload_energy",
        "verdict",
    )

    def __init__(self, plan):
        (n, kinds, params, scheds, out, accept_idx, reject_idx, gadget) = plan
        self.n = n
        self.kinds = kinds
        self.tn = [0] * n
        self.td = [1] * n
        self.rn = [0] * n
        self.rd = [1] * n
        self.mn = [1] * n
        self.md = [1] * n
        for k in range(n):
            if params[k] is not None:
                (self.tn[k], self.td[k], self.rn[k], self.rd[k],
                 self.mn[k], self.md[k]) = params[k]
        self.scheds = scheds
        self.out = out
        self.accept_idx = accept_idx
        self.reject_idx = reject_idx
        self.gadget = gadget
        self.t = 0
        self.un = [0] * n
        self.ud = [1] * n
        self.last = [0] * n
        # Zero-threshold neurons fire unconditionally; seed them as candidates.
        self.carry = {k for k in range(n) if kinds[k] == 0 and self.tn[k] == 0}
        self.bucket = {}
        self.heap = []
        self.expl_pos = [0] * n
        for k in range(n):
            if kinds[k] == 1:
                first = self._first_fire(k)
                if first is not None:
                    heappush(self.heap, (first, k))
        self.energy = 0
        self.payload_energy = 0
        self.verdict = VERDICT_NONE

    def _first_fire(self, k):
        desc = self.scheds[k]
        if desc[0] == "e":
            times = desc[1]
            return times[0] if times else None
        return desc[1]

    def _next_fire(self, k, after):
        desc = self.scheds[k]
        if desc[0] == "e":
            times = desc[1]
            pos = self.expl_pos[k] + 1
            self.expl_pos[k] = pos
            return times[pos] if pos < len(times) else None
        return after + desc[2]

    def step(self):
        """Run one synchronous step; return the sorted fired indices."""
        t = self.t
        inputs = self.bucket.pop(t, None)
        cand = self.carry
        self.carry = set()
        if inputs:
            cand.update(inputs)
        due = None
        heap = self.heap
        while heap and heap[0][0] == t:
            _, k = heappop(heap)
            if due is None:
                due = set()
            due.add(k)
            nxt = self._next_fire(k, t)
            if nxt is not None:
                heappush(heap, (nxt, k))
        if due:
            cand.update(due)
        self.t = t + 1
        if not cand:
            return []
        fired = []
        kinds = self.kinds
        un = self.un
        ud = self.ud
        last = self.last
        for k in sorted(cand):
            if kinds[k] == 1:
                if due is not None and k in due:
                    fired.append(k)
                continue
            nu = un[k]
            du = ud[k]
            if nu:
                dt = t - last[k]
                if dt:
                    mn = self.mn[k]
                    if mn == 0:
                        nu = 0
                        du = 1
                    elif mn != self.md[k]:
                        nu *= mn ** dt
                        du *= self.md[k] ** dt
                        g = gcd(nu, du)
                        if g > 1:
                            nu //= g
                            du //= g
            if inputs is not None and k in inputs:
                sn, sd = inputs[k]
                if du == 1 and sd == 1:  # integer fast path
                    nu = nu + sn
                else:
                    nu = nu * sd + sn * du
                    if nu:
                        du *= sd
                        g = gcd(nu, du)
                        if g > 1:
                            nu //= g
                            du //= g
                    else:
                        du = 1
            if nu < 0:
                nu = 0
                du = 1
            td = self.td[k]
            if (nu >= self.tn[k] if du == 1 and td == 1 else nu * td >= self.tn[k] * du):
                fired.append(k)
                nu = self.rn[k]
                du = self.rd[k]
                self.carry.add(k)
            un[k] = nu
            ud[k] = du
            last[k] = t
        if fired:
            energy = self.energy
            payload = self.payload_energy
            gadget = self.gadget
            bucket = self.bucket
            acc = False
            rej = False
            for k in fired:
                energy += 1
                if not gadget[k]:
                    payload += 1
                if k == self.accept_idx:
                    acc = True
                elif k == self.reject_idx:
                    rej = True
                for post, delay, wn, wd in self.out[k]:
                    slot = bucket.get(t + delay)
                    if slot is None:
                        bucket[t + delay] = {post: (wn, wd)}
                    elif post in slot:
                        an, ad = slot[post]
                        if ad == 1 and wd == 1:  # integer fast path
                            slot[post] = (an + wn, 1)
                        else:
                            sn = an * wd + wn * ad
                            if sn:
                                sd = ad * wd
                                g = gcd(sn, sd)
                                if g > 1:
                                    sn //= g
                                    sd //= g
                                slot[post] = (sn, sd)
                            else:
                                slot[post] = (0, 1)
                    else:
                        slot[post] = (wn, wd)
            self.energy = energy
            self.payload_energy = payload
            if acc:
                self.verdict = VERDICT_AMBIGUOUS if rej else VERDICT_ACCEPT
            elif rej:
                self.verdict = VERDICT_REJECT
        return fired

    def potential_pairs(self):
        """Materialize end-of-last-step potentials for regular neurons."""
        tm = self.t - 1
        pairs = []
        for k in range(self.n):
            if self.kinds[k] == 1:
                pairs.append(None)
                continue
            nu = self.un[k]
            du = self.ud[k]
            dt = tm - self.last[k]
            if nu and dt > 0:
                mn = self.mn[k]
                md = self.md[k]
                if mn == 0:
                    nu, du = 0, 1
                elif mn != md:
                    nu *= mn ** dt
                    du *= md ** dt
                    g = gcd(nu, du)
                    if g > 1:
                        nu //= g
                        du //= g
            pairs.append((nu, du))
        return pairs

    def pending_pairs(self):
        """Snapshot of undelivered inputs: {(arrival, idx): (num, den)}."""
        snapshot = {}
        for arrival, slot in self.bucket.items():
            for k, pair in slot.items():
                snapshot[(arrival, k)] = pair
        return snapshot
