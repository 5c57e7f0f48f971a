"""Deterministic seed derivation.

All randomness in the package flows from one 64-bit root seed.  Components
derive their own streams with `derive(root, label, *indices)`; the label is a
short documented string ("noise", "phase", "engine", ...) so two components
can never collide on the same stream.
"""

import hashlib

MASK64 = 0xFFFFFFFFFFFFFFFF


def derive(root_seed: int, label: str, *indices: int) -> int:
    """Derive a child 64-bit seed from a root seed, a label, and indices."""
    key = f"{root_seed & MASK64}:{label}:" + ":".join(str(i) for i in indices)
    digest = hashlib.sha256(key.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "little")


def splitmix64(state: int) -> tuple[int, int]:
    """One step of the splitmix64 generator: returns (next_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, (z ^ (z >> 31)) & MASK64
