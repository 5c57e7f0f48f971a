"""Numba kernel for the Monte-Carlo tree search.

Flat int8 boards (0 empty, 1 black, 2 white), an xorshift64* RNG for
platform-stable determinism, stamp-marked flood fills, and one preallocated
node pool per search.  Interior tree/playout legality uses occupied/suicide/
simple-ko; the caller supplies fully rules-checked root candidates.
"""

import numpy as np
from numba import njit

U64 = np.uint64
_MULT = U64(0x2545F4914F6CDD1D)


@njit(cache=True, inline="always")
def _next_u64(rng):
    x = rng[0]
    x ^= x >> U64(12)
    x ^= x << U64(25)
    x ^= x >> U64(27)
    rng[0] = x
    return x * _MULT


@njit(cache=True, inline="always")
def _rand_below(rng, m):
    # multiplicative range reduction on the high 32 bits
    return np.int64((_next_u64(rng) >> U64(32)) * U64(m) >> U64(32))


@njit(cache=True)
def _libs_capped(board, size, start, cap, visited, stamp_box, stack):
    """Count liberties of the group at `start`, stopping at `cap`."""
    stamp_box[0] += 1
    stamp = stamp_box[0]
    color = board[start]
    top = 0
    stack[top] = start
    top += 1
    visited[start] = stamp
    libs = 0
    while top > 0:
        top -= 1
        idx = stack[top]
        x = idx % size
        for d in range(4):
            if d == 0:
                if x == 0:
                    continue
                nb = idx - 1
            elif d == 1:
                if x == size - 1:
                    continue
                nb = idx + 1
            elif d == 2:
                if idx < size:
                    continue
                nb = idx - size
            else:
                if idx >= size * (size - 1):
                    continue
                nb = idx + size
            if visited[nb] == stamp:
                continue
            v = board[nb]
            if v == 0:
                visited[nb] = stamp
                libs += 1
                if libs >= cap:
                    return libs
            elif v == color:
                visited[nb] = stamp
                stack[top] = nb
                top += 1
    return libs


@njit(cache=True)
def _capture_group(board, size, start, stack, captured_buf, n_captured):
    """Remove the group at `start`; append removed points to captured_buf."""
    color = board[start]
    top = 0
    stack[top] = start
    top += 1
    board[start] = 0
    captured_buf[n_captured] = start
    n_captured += 1
    while top > 0:
        top -= 1
        idx = stack[top]
        x = idx % size
        for d in range(4):
            if d == 0:
                if x == 0:
                    continue
                nb = idx - 1
            elif d == 1:
                if x == size - 1:
                    continue
                nb = idx + 1
            elif d == 2:
                if idx < size:
                    continue
                nb = idx - size
            else:
                if idx >= size * (size - 1):
                    continue
                nb = idx + size
            if board[nb] == color:
                board[nb] = 0
                captured_buf[n_captured] = nb
                n_captured += 1
                stack[top] = nb
                top += 1
    return n_captured


@njit(cache=True)
def _is_legal(board, size, pt, color, ko_point, visited, stamp_box, stack):
    """Legality without mutation: occupied / simple-ko / suicide."""
    if board[pt] != 0 or pt == ko_point:
        return False
    x = pt % size
    opp = 3 - color
    # any empty neighbor -> immediately alive
    for d in range(4):
        if d == 0:
            if x == 0:
                continue
            nb = pt - 1
        elif d == 1:
            if x == size - 1:
                continue
            nb = pt + 1
        elif d == 2:
            if pt < size:
                continue
            nb = pt - size
        else:
            if pt >= size * (size - 1):
                continue
            nb = pt + size
        if board[nb] == 0:
            return True
    # captures something, or joins a group that keeps a liberty
    for d in range(4):
        if d == 0:
            if x == 0:
                continue
            nb = pt - 1
        elif d == 1:
            if x == size - 1:
                continue
            nb = pt + 1
        elif d == 2:
            if pt < size:
                continue
            nb = pt - size
        else:
            if pt >= size * (size - 1):
                continue
            nb = pt + size
        v = board[nb]
        if v == opp:
            if _libs_capped(board, size, nb, 2, visited, stamp_box, stack) == 1:
                return True
        elif v == color:
            if _libs_capped(board, size, nb, 2, visited, stamp_box, stack) >= 2:
                return True
    return False


@njit(cache=True)
def _play_commit(board, size, pt, color, visited, stamp_box, stack, captured_buf):
    """Apply a pre-checked legal move; returns (new_ko_point, n_captured)."""
    opp = 3 - color
    board[pt] = color
    x = pt % size
    n_captured = 0
    for d in range(4):
        if d == 0:
            if x == 0:
                continue
            nb = pt - 1
        elif d == 1:
            if x == size - 1:
                continue
            nb = pt + 1
        elif d == 2:
            if pt < size:
                continue
            nb = pt - size
        else:
            if pt >= size * (size - 1):
                continue
            nb = pt + size
        if board[nb] == opp:
            if _libs_capped(board, size, nb, 1, visited, stamp_box, stack) == 0:
                n_captured = _capture_group(board, size, nb, stack, captured_buf, n_captured)
    ko = -1
    if n_captured == 1:
        # ko iff the new stone stands alone with exactly one liberty
        own_nb = 0
        empty_nb = 0
        for d in range(4):
            if d == 0:
                if x == 0:
                    continue
                nb = pt - 1
            elif d == 1:
                if x == size - 1:
                    continue
                nb = pt + 1
            elif d == 2:
                if pt < size:
                    continue
                nb = pt - size
            else:
                if pt >= size * (size - 1):
                    continue
                nb = pt + size
            if board[nb] == color:
                own_nb += 1
            elif board[nb] == 0:
                empty_nb += 1
        if own_nb == 0 and empty_nb == 1:
            ko = captured_buf[0]
    return ko, n_captured


@njit(cache=True)
def _is_true_eye(board, size, pt, color):
    """Single-point eye: all orthogonal own; at most one enemy diagonal, none at edge."""
    x = pt % size
    y = pt // size
    for d in range(4):
        if d == 0:
            if x == 0:
                continue
            nb = pt - 1
        elif d == 1:
            if x == size - 1:
                continue
            nb = pt + 1
        elif d == 2:
            if y == 0:
                continue
            nb = pt - size
        else:
            if y == size - 1:
                continue
            nb = pt + size
        if board[nb] != color:
            return False
    enemy = 0
    present = 0
    opp = 3 - color
    for dx in range(-1, 2, 2):
        for dy in range(-1, 2, 2):
            nx = x + dx
            ny = y + dy
            if 0 <= nx < size and 0 <= ny < size:
                present += 1
                if board[ny * size + nx] == opp:
                    enemy += 1
    if present < 4:
        return enemy == 0
    return enemy <= 1


@njit(cache=True)
def _area_diff(board, size, visited, stamp_box, stack):
    """Tromp-Taylor area: black points minus white points (no komi)."""
    n = size * size
    black = 0
    white = 0
    stamp_box[0] += 1
    stamp = stamp_box[0]
    for start in range(n):
        v = board[start]
        if v == 1:
            black += 1
            continue
        if v == 2:
            white += 1
            continue
        if visited[start] == stamp:
            continue
        # flood this empty region, recording which colors it touches
        region = 0
        touches_black = False
        touches_white = False
        top = 0
        stack[top] = start
        top += 1
        visited[start] = stamp
        while top > 0:
            top -= 1
            idx = stack[top]
            region += 1
            x = idx % size
            for d in range(4):
                if d == 0:
                    if x == 0:
                        continue
                    nb = idx - 1
                elif d == 1:
                    if x == size - 1:
                        continue
                    nb = idx + 1
                elif d == 2:
                    if idx < size:
                        continue
                    nb = idx - size
                else:
                    if idx >= size * (size - 1):
                        continue
                    nb = idx + size
                w = board[nb]
                if w == 0:
                    if visited[nb] != stamp:
                        visited[nb] = stamp
                        stack[top] = nb
                        top += 1
                elif w == 1:
                    touches_black = True
                else:
                    touches_white = True
        if touches_black and not touches_white:
            black += region
        elif touches_white and not touches_black:
            white += region
    return black - white


@njit(cache=True)
def _refill_empties(board, size, empties):
    n = size * size
    count = 0
    for pt in range(n):
        if board[pt] == 0:
            empties[count] = pt
            count += 1
    return count


@njit(cache=True)
def _playout(
    board, size, to_move, ko_point, passes, max_moves, komi,
    rng, empties, visited, stamp_box, stack, captured_buf,
):
    """Uniform-random legal playout (eye fills excluded); returns Black's result."""
    n_empty = _refill_empties(board, size, empties)
    color = to_move
    moves_done = 0
    while passes < 2 and moves_done < max_moves:
        # lazy Fisher-Yates: the first legal candidate is uniform over legal moves
        chosen_at = -1
        for i in range(n_empty):
            j = i + _rand_below(rng, n_empty - i)
            tmp = empties[i]
            empties[i] = empties[j]
            empties[j] = tmp
            pt = empties[i]
            if _is_true_eye(board, size, pt, color):
                continue
            if _is_legal(board, size, pt, color, ko_point, visited, stamp_box, stack):
                chosen_at = i
                break
        if chosen_at < 0:
            ko_point = -1
            passes += 1
            color = 3 - color
            moves_done += 1
            continue
        chosen = empties[chosen_at]
        ko_point, n_captured = _play_commit(
            board, size, chosen, color, visited, stamp_box, stack, captured_buf
        )
        # update the empties set: remove the played point, add captures
        n_empty -= 1
        empties[chosen_at] = empties[n_empty]
        for c in range(n_captured):
            empties[n_empty] = captured_buf[c]
            n_empty += 1
        passes = 0
        color = 3 - color
        moves_done += 1
    diff = _area_diff(board, size, visited, stamp_box, stack) - komi
    if diff > 0:
        return 1.0
    if diff < 0:
        return 0.0
    return 0.5


@njit(cache=True)
def _enumerate_candidates(board, size, color, ko_point, out, visited, stamp_box, stack):
    """Legal plays in point order, then pass (encoded as size*size)."""
    n = size * size
    count = 0
    for pt in range(n):
        if _is_legal(board, size, pt, color, ko_point, visited, stamp_box, stack):
            out[count] = pt
            count += 1
    out[count] = n  # pass
    return count + 1


@njit(cache=True)
def uct_search(
    root_board, size, root_to_move, root_passes, komi,
    playouts, exploration_c, max_playout_moves, seed,
    root_cands,
    out_moves, out_visits, out_wins,
):
    """Run UCT from the root position; fill per-root-child statistics.

    Returns the number of root children.  Deterministic in all arguments.
    """
    n = size * size
    max_nodes = playouts + 2
    cand_cap = n + 1

    node_parent = np.full(max_nodes, -1, np.int32)
    node_move = np.full(max_nodes, -1, np.int16)
    node_visits = np.zeros(max_nodes, np.int32)
    node_wins = np.zeros(max_nodes, np.float64)
    node_first_child = np.full(max_nodes, -1, np.int32)
    node_next_sibling = np.full(max_nodes, -1, np.int32)
    node_cand_off = np.zeros(max_nodes, np.int64)
    node_cand_n = np.zeros(max_nodes, np.int16)
    node_cand_used = np.zeros(max_nodes, np.int16)
    node_terminal = np.zeros(max_nodes, np.int8)
    cand_buf = np.zeros(max_nodes * cand_cap, np.int16)

    visited = np.zeros(n, np.int64)
    stamp_box = np.zeros(1, np.int64)
    stack = np.empty(n, np.int32)
    captured_buf = np.empty(n, np.int32)
    empties = np.empty(n, np.int32)
    board = np.empty(n, np.int8)
    path = np.empty(max_nodes + 1, np.int32)

    rng = np.empty(1, U64)
    rng[0] = U64(seed if seed != 0 else 0x9E3779B97F4A7C15)

    # root node
    n_nodes = 1
    node_cand_off[0] = 0
    node_cand_n[0] = len(root_cands)
    for i in range(len(root_cands)):
        cand_buf[i] = root_cands[i]

    for _ in range(playouts):
        for i in range(n):
            board[i] = root_board[i]
        color = root_to_move
        passes = root_passes
        ko = -1
        cur = 0
        depth = 0
        path[depth] = 0
        result = -1.0

        while True:
            if node_terminal[cur] == 1:
                diff = _area_diff(board, size, visited, stamp_box, stack) - komi
                result = 1.0 if diff > 0 else (0.0 if diff < 0 else 0.5)
                break
            if node_cand_used[cur] < node_cand_n[cur]:
                # expansion: materialize the next untried child
                mv = cand_buf[node_cand_off[cur] + node_cand_used[cur]]
                node_cand_used[cur] += 1
                if mv == n:
                    passes += 1
                    ko = -1
                else:
                    ko, _ = _play_commit(
                        board, size, mv, color, visited, stamp_box, stack, captured_buf
                    )
                    passes = 0
                color = 3 - color
                child = n_nodes
                n_nodes += 1
                node_parent[child] = cur
                node_move[child] = mv
                node_next_sibling[child] = node_first_child[cur]
                node_first_child[cur] = child
                node_cand_off[child] = child * cand_cap
                if passes >= 2:
                    node_terminal[child] = 1
                    node_cand_n[child] = 0
                else:
                    node_cand_n[child] = _enumerate_candidates(
                        board, size, color, ko,
                        cand_buf[child * cand_cap : (child + 1) * cand_cap],
                        visited, stamp_box, stack,
                    )
                depth += 1
                path[depth] = child
                cur = child
                if node_terminal[cur] == 1:
                    diff = _area_diff(board, size, visited, stamp_box, stack) - komi
                    result = 1.0 if diff > 0 else (0.0 if diff < 0 else 0.5)
                else:
                    result = _playout(
                        board, size, color, ko, passes, max_playout_moves, komi,
                        rng, empties, visited, stamp_box, stack, captured_buf,
                    )
                break
            # selection: UCB1 over fully-materialized children
            log_np = np.log(node_visits[cur] + 1.0)
            best_child = -1
            best_value = -1.0e18
            child = node_first_child[cur]
            while child != -1:
                v = node_visits[child]
                mean = node_wins[child] / v
                value = mean + exploration_c * np.sqrt(log_np / v)
                if value > best_value:
                    best_value = value
                    best_child = child
                child = node_next_sibling[child]
            mv = node_move[best_child]
            if mv == n:
                passes += 1
                ko = -1
            else:
                ko, _ = _play_commit(
                    board, size, mv, color, visited, stamp_box, stack, captured_buf
                )
                passes = 0
            color = 3 - color
            depth += 1
            path[depth] = best_child
            cur = best_child

        # backpropagate: a node's wins are for the side that made its move
        mover = root_to_move
        for d in range(depth + 1):
            v = path[d]
            node_visits[v] += 1
            if d > 0:
                node_wins[v] += result if mover == 1 else 1.0 - result
                mover = 3 - mover
        # mover alternation: path[1]'s move was made by root_to_move
        # (handled by flipping after adding; root itself accrues visits only)

    # emit root children in candidate order (point index order)
    count = 0
    for i in range(node_cand_used[0]):
        mv = cand_buf[i]
        child = node_first_child[0]
        while child != -1:
            if node_move[child] == mv:
                out_moves[count] = mv
                out_visits[count] = node_visits[child]
                out_wins[count] = node_wins[child]
                count += 1
                break
            child = node_next_sibling[child]
    return count
