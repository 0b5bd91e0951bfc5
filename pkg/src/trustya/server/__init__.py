from .protocol import (
    CLIENT_KINDS,
    Envelope,
    ProtocolError,
    SERVER_KINDS,
    SUBMIT_PHASES,
    check_payload,
    encode_envelope,
    parse_envelope,
)
from .session import (
    DEFAULT_GRACE,
    DEFAULT_TIMEOUTS,
    HUMAN_KIND,
    PhaseTimeouts,
    Send,
    SessionCore,
    TimerRequest,
)

__all__ = [
    "CLIENT_KINDS",
    "DEFAULT_GRACE",
    "DEFAULT_TIMEOUTS",
    "Envelope",
    "HUMAN_KIND",
    "PhaseTimeouts",
    "ProtocolError",
    "SERVER_KINDS",
    "SUBMIT_PHASES",
    "Send",
    "SessionCore",
    "TimerRequest",
    "check_payload",
    "encode_envelope",
    "parse_envelope",
]
