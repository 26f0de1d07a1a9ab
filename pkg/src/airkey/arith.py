"""Arbitrary-precision decimal arithmetic for the protocol signal path.

Everything the protocols transmit is a real number carried as a base-10
``decimal.Decimal``.  Base-10 matters: the digit-agreement analysis of the
eavesdropper reasons about decimal digits, so a binary significand would make
those statements untestable.  A :class:`PrecisionContext` pins the number of
significant digits; ``ln``/``exp`` are evaluated at 1.5x the context precision
and rounded back, which keeps them well inside a 2-ulp error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from decimal import Context, Decimal, ROUND_HALF_EVEN, localcontext

from .errors import NonPositiveInput, NotNearInteger, Overflow

# Real-valued signals are plain Decimals; the alias marks intent in signatures.
BigReal = Decimal

_LN10 = math.log(10)
_EMAX = 10**9


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision for all transcendental arithmetic.

    digits
        significant decimal digits carried by results (>= 16).
    elastic
        when True, ``exp`` silently raises its own output precision so that
        results with more than ``digits`` integer digits are still resolved
        exactly; when False such results raise :class:`Overflow` instead of
        ever mis-rounding.
    guard
        headroom (in digits) kept between a result's magnitude and the
        context precision before the elastic/overflow decision triggers.
    max_exponent
        hard bound on the decimal exponent of any ``exp`` result.
    """

    digits: int = 50
    elastic: bool = True
    guard: int = 16
    max_exponent: int = 1_000_000

    def __post_init__(self):
        if self.digits < 16:
            raise ValueError("precision context needs at least 16 digits")
        if self.guard < 1:
            raise ValueError("guard must be positive")

    @property
    def tolerance(self) -> Decimal:
        """Default integer-rounding tolerance: 10^-(digits/4).

        Leaves large headroom over the 2-ulp arithmetic error while still
        rejecting genuinely corrupted values.
        """
        return Decimal(1).scaleb(-(self.digits // 4))

    def _context(self, prec: int) -> Context:
        return Context(prec=prec, rounding=ROUND_HALF_EVEN, Emax=_EMAX, Emin=-_EMAX)

    def local(self):
        """Run ambient Decimal arithmetic at this context's working precision.

        Plain ``+``/``*`` on Decimals obey the thread's current context
        (28 digits by default), so callers composing BigReals must wrap the
        arithmetic:  ``with ctx.local(): y = ln(a, ctx) + ln(b, ctx)``.
        """
        return localcontext(self._context(self._working_prec()))

    def _working_prec(self, target: int | None = None) -> int:
        # 1.5x the context precision, but the surplus never needs to exceed
        # a few dozen digits: cap it so very wide contexts stay affordable.
        target = self.digits if target is None else target
        return target + max(16, min(self.digits // 2, 64))


def elevate_for_magnitude(ctx: PrecisionContext, magnitude: int) -> PrecisionContext:
    """Context with enough digits to resolve a value of about 10**magnitude.

    Exponentiating amplifies any error in its argument by the size of the
    result, so the log-domain inputs must already carry as many digits as
    the product will have.  A non-elastic context is returned unchanged:
    ``exp`` then raises Overflow instead of being silently rescued here.
    """
    needed = magnitude + 2 * ctx.guard + ctx.digits // 4
    if needed <= ctx.digits or not ctx.elastic:
        return ctx
    return replace(ctx, digits=needed)


def to_bigreal(value) -> BigReal:
    """Convert int/str/float/Decimal to a BigReal without binary noise."""
    if isinstance(value, Decimal):
        return value
    if isinstance(value, float):
        return Decimal(repr(value))
    return Decimal(value)


def ln(x: BigReal, ctx: PrecisionContext) -> BigReal:
    """Natural logarithm of ``x`` (> 0), accurate to <= 2 ulp at ctx.digits."""
    x = to_bigreal(x)
    if not x.is_finite() or x <= 0:
        raise NonPositiveInput(f"ln requires a positive finite input, got {x}")
    with localcontext(ctx._context(ctx._working_prec())):
        r = x.ln()
    return ctx._context(ctx.digits).plus(r)


def exp(x: BigReal, ctx: PrecisionContext) -> BigReal:
    """e**x, accurate to <= 2 ulp at the precision of the returned value.

    The returned precision is ctx.digits unless the result carries more
    integer digits than that; an elastic context then widens the output so
    the integer part stays exactly representable, a strict context raises
    :class:`Overflow`.
    """
    x = to_bigreal(x)
    if not x.is_finite():
        raise NonPositiveInput(f"exp requires a finite input, got {x}")
    if x.adjusted() > 18 and x > 0:
        raise Overflow(f"exp argument {x} is out of any representable range")
    magnitude = math.floor(float(x) / _LN10)  # decimal exponent of the result
    if abs(magnitude) > ctx.max_exponent:
        raise Overflow(
            f"exp result exponent {magnitude} exceeds bound {ctx.max_exponent}"
        )
    target = ctx.digits
    if magnitude + ctx.guard > ctx.digits:
        if not ctx.elastic:
            raise Overflow(
                f"result needs about {magnitude + 1} integer digits but the "
                f"context carries only {ctx.digits} (guard {ctx.guard})"
            )
        target = magnitude + ctx.guard + ctx.digits // 2
    with localcontext(ctx._context(ctx._working_prec(target))):
        r = x.exp()
    return ctx._context(target).plus(r)


def nearest_integer(x: BigReal):
    """Nearest integer to ``x`` and the exact distance to it."""
    x = to_bigreal(x)
    n = x.to_integral_value(rounding=ROUND_HALF_EVEN)
    with localcontext(Context(prec=max(len(x.as_tuple().digits) + 10, 28),
                              Emax=_EMAX, Emin=-_EMAX)):
        distance = abs(x - n)
    return int(n), distance


def round_to_integer(x: BigReal, tol: BigReal) -> int:
    """Round ``x`` to the nearest integer if it is within ``tol`` of one.

    Raises :class:`NotNearInteger` otherwise; the recorded distance tells a
    caller whether precision ran out or the value is genuinely corrupted.
    """
    tol = to_bigreal(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    n, distance = nearest_integer(x)
    if distance > tol:
        raise NotNearInteger(x, n, distance, tol)
    return n


def leading_digit_overlap(a: BigReal, b: BigReal) -> int:
    """Count of identical most-significant decimal digits of ``a`` and ``b``.

    Digits are compared after aligning decimal exponents; numbers of
    different order of magnitude share zero leading digits by definition.
    """
    a, b = to_bigreal(a), to_bigreal(b)
    if a <= 0 or b <= 0:
        raise NonPositiveInput("digit comparison is defined for positive values")
    if a.adjusted() != b.adjusted():
        return 0
    da = a.as_tuple().digits
    db = b.as_tuple().digits
    # A terminating decimal continues with zeros; pad so 1234 vs 1234.005
    # compares the full expansions rather than stopping at the short one.
    width = max(len(da), len(db))
    da = da + (0,) * (width - len(da))
    db = db + (0,) * (width - len(db))
    count = 0
    for x, y in zip(da, db):
        if x != y:
            break
        count += 1
    return count
