"""Pure-Python kernels for the three hot loops.

The compiled extension (``twistbench._speedups``) implements the same three
functions with identical semantics; ``twistbench.kernel`` picks one at import
time.  Everything here works for any vertex count; the compiled kernel is
restricted to <= 63 vertices and the dispatcher falls back to this module
beyond that.

Letter encoding for group words on a graph with ``n`` vertices: the letter for
vertex ``v`` (0-based) with sign ``+1`` is ``v + 1``, with sign ``-1`` it is
``-(v + 1)``.  Words are tuples of such integers.
"""

IMPL_NAME = "python"


def _noncommuting_masks(adj):
    """noncomm[v] = bitmask of vertices u != v that do not commute with v."""
    n = len(adj)
    full = (1 << n) - 1
    return tuple((full & ~adj[v]) & ~(1 << v) for v in range(n))


def normalize(adj, word):
    """Shuffle-reduced, lexicographically least normal form of ``word``.

    Uses the stack ("piling") construction for trace monoids: each vertex
    owns a stack receiving its own signed letters and a 0 marker for every
    non-commuting letter pushed after it.  A letter cancels exactly when the
    top of its own stack is its inverse, which certifies that only commuting
    letters separate the pair.  Reading the piles back greedily from the
    least available vertex yields the lexicographically least representative.
    """
    n = len(adj)
    noncomm = _noncommuting_masks(adj)
    piles = [[] for _ in range(n)]
    count = 0
    for letter in word:
        v = letter - 1 if letter > 0 else -letter - 1
        e = 1 if letter > 0 else -1
        pile = piles[v]
        if pile and pile[-1] == -e:
            pile.pop()
            count -= 1
            m = noncomm[v]
            while m:
                u = (m & -m).bit_length() - 1
                piles[u].pop()
                m &= m - 1
        else:
            pile.append(e)
            count += 1
            m = noncomm[v]
            while m:
                u = (m & -m).bit_length() - 1
                piles[u].append(0)
                m &= m - 1
    # depile: repeatedly emit the least vertex whose pile front is a letter
    heads = [0] * n
    out = []
    while count:
        for v in range(n):
            pile = piles[v]
            h = heads[v]
            if h < len(pile) and pile[h] != 0:
                out.append(v + 1 if pile[h] > 0 else -(v + 1))
                heads[v] = h + 1
                m = noncomm[v]
                while m:
                    u = (m & -m).bit_length() - 1
                    heads[u] += 1
                    m &= m - 1
                count -= 1
                break
        else:  # pragma: no cover - piling invariant violated
            raise AssertionError("depiling stalled")
    return tuple(out)


def min_max_conj_displacement(adj, targets, radius, lower_bound):
    """Exact ``min over |x| <= radius of max_s |x^-1 s x|`` for s in targets.

    Returns ``(best, best_radius, nodes_explored)`` where ``best_radius`` is
    the smallest ``|x|`` attaining ``best``.  ``targets`` must be normalized
    words.  Search is breadth-first over the Cayley ball with two exact
    prunings: stop when ``best`` hits ``lower_bound`` (a known global lower
    bound, e.g. the max cyclically-reduced length), and skip a subtree when
    the 2-Lipschitz bound shows it cannot improve on ``best``.
    """
    n = len(adj)
    targets = tuple(tuple(t) for t in targets)
    best = max((len(t) for t in targets), default=0)
    best_radius = 0
    nodes = 1
    if radius <= 0 or best <= lower_bound:
        return best, best_radius, nodes
    letters = [v + 1 for v in range(n)] + [-(v + 1) for v in range(n)]
    visited = {()}
    frontier = [((), targets, best)]
    for r in range(1, radius + 1):
        nxt = []
        for x, ws, fx in frontier:
            if fx - 2 * (radius - len(x)) >= best:
                continue
            for g in letters:
                child = normalize(adj, x + (g,))
                if len(child) != r or child in visited:
                    continue
                visited.add(child)
                nodes += 1
                cws = tuple(normalize(adj, (-g,) + w + (g,)) for w in ws)
                f = max((len(w) for w in cws), default=0)
                if f < best:
                    best = f
                    best_radius = r
                    if best <= lower_bound:
                        return best, best_radius, nodes
                nxt.append((child, cws, f))
        frontier = nxt
        if not frontier:
            break
    return best, best_radius, nodes


def coset_enumerate(nletters, inv, relators, subgens, cap):
    """HLT coset enumeration with coincidence handling.

    ``nletters`` counts generator letters (inverses included); ``inv[l]`` is
    the inverse letter of ``l``.  ``relators`` and ``subgens`` are tuples of
    letter tuples.  Enumerates cosets of ``<subgens>`` in the group presented
    by ``relators``, defining at most ``cap`` cosets. Returns
    ``(finished, live_count)``; when ``finished`` is False the count reflects
    the live cosets at the moment the cap was hit.
    """
    UNDEF = -1
    relators = tuple(tuple(w) for w in relators)
    subgens = tuple(tuple(w) for w in subgens)
    table = [[UNDEF] * nletters]
    parent = [0]

    def find(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define():
        c = len(table)
        table.append([UNDEF] * nletters)
        parent.append(c)
        return c

    pending = []

    def set_edge(a, l, b):
        # a, b must be live representatives
        row = table[a]
        cur = row[l]
        if cur == UNDEF:
            row[l] = b
            back = table[b]
            curb = back[inv[l]]
            if curb == UNDEF:
                back[inv[l]] = a
            else:
                curb = find(curb)
                if curb != a:
                    pending.append((curb, a))
        else:
            cur = find(cur)
            if cur != b:
                pending.append((cur, b))

    def process_coincidences():
        while pending:
            x, y = pending.pop()
            x, y = find(x), find(y)
            if x == y:
                continue
            if y < x:
                x, y = y, x
            parent[y] = x
            rowy = table[y]
            rowx = table[x]
            for l in range(nletters):
                n2 = rowy[l]
                if n2 == UNDEF:
                    continue
                n1 = rowx[l]
                if n1 == UNDEF:
                    # n2's reverse edge points into y's class, which now
                    # resolves to x, so the copied edge stays consistent.
                    rowx[l] = n2
                else:
                    pending.append((n1, n2))

    def scan_and_fill(c, word):
        f, i = c, 0
        b, r = c, len(word) - 1
        while True:
            while i <= r and table[f][word[i]] != UNDEF:
                f = find(table[f][word[i]])
                i += 1
            if i > r:
                if f != b:
                    pending.append((f, b))
                    process_coincidences()
                return True
            while r >= i and table[b][inv[word[r]]] != UNDEF:
                b = find(table[b][inv[word[r]]])
                r -= 1
            if r < i:
                pending.append((f, b))
                process_coincidences()
                return True
            if r == i:
                set_edge(f, word[i], b)
                process_coincidences()
                return True
            if len(table) >= cap:
                return False
            d = define()
            set_edge(f, word[i], d)
            f = d
            i += 1

    def live_count():
        return sum(1 for d in range(len(table)) if parent[d] == d)

    for w in subgens:
        if not scan_and_fill(0, w):
            return False, live_count()

    c = 0
    while c < len(table):
        if parent[c] == c:
            for w in relators:
                if not scan_and_fill(c, w):
                    return False, live_count()
                if parent[c] != c:
                    break
            if parent[c] == c:
                for l in range(nletters):
                    if table[c][l] == UNDEF:
                        if len(table) >= cap:
                            return False, live_count()
                        d = define()
                        set_edge(c, l, d)
        c += 1
    return True, live_count()
