"""Pure-Python hot kernels.

Reference implementations; the Cython module ``_ckernels`` must agree with
these bit for bit (including the clique returned on ties and the node count
at which a budgeted search gives up).
"""

LT, EQ, GT = -1, 0, 1


def lin_cmp(s, t):
    n = min(len(s), len(t))
    for i in range(n):
        a = s[i]
        b = t[i]
        if a != b:
            return LT if a > b else GT
    if len(s) == len(t):
        return EQ
    return LT if len(s) < len(t) else GT


def interval_contains(s, k, t):
    ls = len(s)
    if len(t) <= ls:
        return False
    for i in range(ls):
        if s[i] != t[i]:
            return False
    return t[ls] > k


def _color_sort(cand, adj):
    # greedy sequential coloring in bit order; returns (vertices, colors)
    verts = []
    colors = []
    color = 0
    uncolored = cand
    while uncolored:
        color += 1
        q = uncolored
        while q:
            low = q & -q
            v = low.bit_length() - 1
            q &= ~low
            q &= ~adj[v]
            uncolored &= ~low
            verts.append(v)
            colors.append(color)
    return verts, colors


def max_clique(adj, budget=0):
    """Maximum clique of the graph given by neighbour bitmasks ``adj``.

    Vertices are expected to be pre-ordered; lower indices are tried first.
    ``budget`` caps the number of search nodes (0 means unlimited).
    Returns ``(mask, exact)``.
    """
    n = len(adj)
    if n == 0:
        return 0, True

    # greedy seed in vertex order
    best = 0
    best_size = 0
    cand = (1 << n) - 1
    seed = 0
    size = 0
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        seed |= low
        size += 1
        cand &= adj[v]
    best, best_size = seed, size

    nodes = 0
    aborted = False

    def expand(cur, cur_size, cand):
        nonlocal best, best_size, nodes, aborted
        nodes += 1
        if budget and nodes > budget:
            aborted = True
            return
        verts, colors = _color_sort(cand, adj)
        for idx in range(len(verts) - 1, -1, -1):
            if cur_size + colors[idx] <= best_size:
                return
            v = verts[idx]
            bit = 1 << v
            new_cur = cur | bit
            new_cand = cand & adj[v]
            if new_cand:
                expand(new_cur, cur_size + 1, new_cand)
                if aborted:
                    return
            elif cur_size + 1 > best_size:
                best = new_cur
                best_size = cur_size + 1
            cand &= ~bit

    expand(0, 0, (1 << n) - 1)
    return best, not aborted
