"""Protocol execution transcripts shared by both schemes."""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass
class ProtocolTranscript:
    """Everything one protocol execution produced.

    ``rounds`` holds per-receiver records (one per round for the half-duplex
    scheme, one per user for the single full-duplex exchange).
    ``per_user_secret`` carries each user's recovered shared secret, or None
    where recovery failed.
    """

    protocol: str
    n_users: int
    rounds_used: int
    rounds: list
    per_user_secret: list

    def agreed_secret(self):
        """The common secret if every user recovered the same one, else None."""
        values = set(self.per_user_secret)
        if len(values) == 1 and None not in values:
            return self.per_user_secret[0]
        return None

    def to_json(self) -> str:
        doc = {
            "protocol": self.protocol,
            "n_users": self.n_users,
            "rounds_used": self.rounds_used,
            "per_user_secret": [
                str(s) if s is not None else None for s in self.per_user_secret
            ],
            "rounds": [r.to_dict() for r in self.rounds],
        }
        return json.dumps(doc, sort_keys=True)
