"""Key material derivation and group agreement detection.

The protocols end with a shared integer; applications want fixed-length
key bits.  Derivation is a standard extract-then-expand construction over
HMAC-SHA256, domain-separated by a caller-supplied context label.
"""

from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass

_EXTRACT_SALT = b"airkey/v1/extract"


@dataclass(frozen=True)
class DerivedKey:
    key: bytes
    source_secret: int

    @property
    def hex(self) -> str:
        return self.key.hex()

    @property
    def bit_length(self) -> int:
        return len(self.key) * 8


def derive_key(secret: int, length_bits: int = 256, context_label: bytes = b"") -> DerivedKey:
    """Deterministically expand the shared integer into key bits."""
    if secret < 2:
        raise ValueError("shared secret must be at least 2")
    if length_bits < 8 or length_bits % 8:
        raise ValueError("length_bits must be a positive multiple of 8")
    ikm = secret.to_bytes((secret.bit_length() + 7) // 8, "big")
    prk = hmac.new(_EXTRACT_SALT, ikm, hashlib.sha256).digest()
    okm = b""
    block = b""
    counter = 1
    while len(okm) < length_bits // 8:
        block = hmac.new(
            prk, block + context_label + bytes([counter]), hashlib.sha256
        ).digest()
        okm += block
        counter += 1
    return DerivedKey(key=okm[: length_bits // 8], source_secret=secret)


@dataclass(frozen=True)
class AgreementResult:
    agreed: bool
    agreeing_fraction: float


def group_agreement(secrets) -> AgreementResult:
    """Did every user recover the same secret?

    ``agreeing_fraction`` is the share of users holding the most common
    successfully recovered value; failures (None) never count toward it.
    """
    secrets = list(secrets)
    if not secrets:
        return AgreementResult(agreed=False, agreeing_fraction=0.0)
    recovered = [s for s in secrets if s is not None]
    if not recovered:
        return AgreementResult(agreed=False, agreeing_fraction=0.0)
    top = max(recovered.count(v) for v in set(recovered))
    agreed = top == len(secrets)
    return AgreementResult(agreed=agreed, agreeing_fraction=top / len(secrets))
