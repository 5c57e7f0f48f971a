"""Gaze-driven Go over a synthetic SSVEP brain-computer interface.

Pipeline: two-channel EEG synthesis -> five-class frequency decoding ->
cursor navigation on a Go board -> Monte-Carlo engine replies -> linguistic
game-situation assessment, all tied together by a WebSocket session server.
"""

__version__ = "0.1.0"
