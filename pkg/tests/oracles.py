"""Independent brute-force oracles for small graphs.

Everything here works by explicit enumeration so the answers cannot share a
code path (or a bug) with the flow-based implementation under test.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations


def reachable_from(adj, starts):
    """All nodes reachable from the given start set (starts included)."""
    seen = set(starts)
    queue = deque(starts)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def simple_direct_paths(adj, sources, targets):
    """Every simple path with exactly one source node (first) and one target
    node (last), as node tuples.  Nodes in both sets yield length-0 paths."""
    sources = set(sources)
    targets = set(targets)
    paths = []
    for v in sorted(sources & targets):
        paths.append((v,))

    def extend(path, on_path):
        u = path[-1]
        for w in adj[u]:
            if w in on_path or w in sources:
                continue
            if w in targets:
                paths.append(tuple(path) + (w,))
                continue
            extend(path + [w], on_path | {w})

    for a in sorted(sources):
        if a in targets:
            continue  # only the zero-length path is direct from such a node
        extend([a], {a})
    return paths


def max_disjoint_paths(paths, upper_bound=None):
    """Maximum number of pairwise vertex-disjoint paths among the given ones."""
    masks = []
    node_ids = {}
    for path in paths:
        mask = 0
        for v in path:
            if v not in node_ids:
                node_ids[v] = len(node_ids)
            mask |= 1 << node_ids[v]
        masks.append(mask)
    best = 0

    def search(idx, used, count):
        nonlocal best
        if count > best:
            best = count
        if upper_bound is not None and best >= upper_bound:
            return
        if count + (len(masks) - idx) <= best:
            return
        for k in range(idx, len(masks)):
            if masks[k] & used == 0:
                search(k + 1, used | masks[k], count + 1)

    search(0, 0, 0)
    return best


def bf_max_linking_size(adj, sources, targets):
    """Maximum linking size by enumerating direct paths and disjoint subsets."""
    paths = simple_direct_paths(adj, sources, targets)
    bound = min(len(set(sources)), len(set(targets)))
    return max_disjoint_paths(paths, upper_bound=bound)


def bf_is_admissible(adj, steering, targets):
    """Whether a steering set supports one disjoint path per target.

    Directness is taken relative to the steering set itself: a path may pass
    through available nodes that are not in the chosen set.
    """
    targets = set(targets)
    return bf_max_linking_size(adj, set(steering), targets) == len(targets)


def bf_admissible_subsets(adj, available, targets):
    """All admissible subsets of the available set (ground truth for labels)."""
    available = sorted(set(available))
    out = []
    for r in range(len(available) + 1):
        for combo in combinations(available, r):
            if bf_is_admissible(adj, combo, targets):
                out.append(frozenset(combo))
    return out


def bf_classify(adj, available, targets):
    """Essential/useful/useless labels straight from their definitions.

    Essential: in every admissible set.  Useless: every admissible set
    containing it stays admissible after dropping it.  Returns None when no
    admissible set exists.
    """
    admissible = bf_admissible_subsets(adj, available, targets)
    if not admissible:
        return None
    admissible_set = set(admissible)
    labels = {}
    for a in sorted(set(available)):
        if all(a in d for d in admissible):
            labels[a] = "essential"
            continue
        containing = [d for d in admissible if a in d]
        if all(d - {a} in admissible_set for d in containing):
            labels[a] = "useless"
        else:
            labels[a] = "useful"
    return labels


def is_separator(adj, sources, targets, blocked):
    """Whether removing ``blocked`` leaves no source-to-target path.

    A node in both sets must itself be blocked (its length-0 path has no
    other node to cut).
    """
    sources = set(sources)
    targets = set(targets)
    blocked = set(blocked)
    if (sources & targets) - blocked:
        return False
    live = [a for a in sources if a not in blocked]
    seen = set(live)
    queue = deque(live)
    while queue:
        u = queue.popleft()
        if u in targets:
            return False
        for v in adj[u]:
            if v not in seen and v not in blocked:
                seen.add(v)
                queue.append(v)
    return not (seen & targets)


def bf_minimum_separators(adj, sources, targets, size):
    """All separators of exactly the given size (subsets of all nodes)."""
    nodes = sorted(adj)
    return [
        frozenset(combo)
        for combo in combinations(nodes, size)
        if is_separator(adj, sources, targets, combo)
    ]


def bf_all_maximum_linkings(adj, sources, targets):
    """All maximum-size families of disjoint direct paths, as path-sets."""
    paths = simple_direct_paths(adj, sources, targets)
    size = bf_max_linking_size(adj, sources, targets)
    out = []

    def search(idx, used, chosen):
        if len(chosen) == size:
            out.append(frozenset(chosen))
            return
        if len(chosen) + (len(paths) - idx) < size:
            return
        for k in range(idx, len(paths)):
            mask = masks[k]
            if mask & used == 0:
                search(k + 1, used | mask, chosen + [paths[k]])

    masks = []
    node_ids = {}
    for path in paths:
        mask = 0
        for v in path:
            if v not in node_ids:
                node_ids[v] = len(node_ids)
            mask |= 1 << node_ids[v]
        masks.append(mask)
    search(0, 0, [])
    return out
