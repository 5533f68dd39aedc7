"""Partial calendar dates and citation timespans.

Publication dates come with explicit precision: a bare year, a year-month,
or a full day. A citation timespan is the signed calendar interval between
the cited and citing publication dates, computed at the coarser of the two
precisions and rendered ISO-8601 style ("P2Y0M5D", "-P2Y").

Day-precision subtraction uses month borrowing: while the day difference is
negative, one month is borrowed and the day count of the calendar month
immediately preceding the later date's month (walking further back on each
borrow) is added. Month borrowing works the same way against a 12-month
year. This makes the span exactly re-expandable on the calendar from the
interval's earlier endpoint (see TimeSpan.expand_from).
"""

from __future__ import annotations

import datetime
import enum
import re
from dataclasses import dataclass

from .errors import InvalidDate

__all__ = [
    "Precision",
    "PartialDate",
    "TimeSpan",
    "parse_partial_date",
    "parse_timespan",
    "compute_timespan",
]


class Precision(enum.IntEnum):
    """Depth of a partial date or timespan; orderable, YEAR coarsest."""

    YEAR = 1
    MONTH = 2
    DAY = 3

    @property
    def label(self) -> str:
        return self.name.lower()


_DATE_RE = re.compile(r"^(\d{4})(?:-(\d{2})(?:-(\d{2}))?)?$")
_SPAN_RE = re.compile(r"^(-)?P(\d+)Y(?:(\d+)M(?:(\d+)D)?)?$")


@dataclass(frozen=True, slots=True)
class PartialDate:
    """A proleptic Gregorian date known down to year, month, or day."""

    year: int
    month: int | None = None
    day: int | None = None

    def __post_init__(self) -> None:
        if not 1000 <= self.year <= 2999:
            raise InvalidDate(f"year {self.year} outside 1000-2999")
        if self.day is not None and self.month is None:
            raise InvalidDate("day given without month")
        if self.month is not None and not 1 <= self.month <= 12:
            raise InvalidDate(f"month {self.month} outside 1-12")
        if self.day is not None:
            try:
                datetime.date(self.year, self.month, self.day)
            except ValueError:
                raise InvalidDate(
                    f"{self.year:04d}-{self.month:02d}-{self.day:02d} is not a calendar day"
                ) from None

    @property
    def precision(self) -> Precision:
        if self.day is not None:
            return Precision.DAY
        if self.month is not None:
            return Precision.MONTH
        return Precision.YEAR

    def truncated(self, precision: Precision) -> "PartialDate":
        """Drop components below `precision`; never adds detail."""
        if precision >= self.precision:
            return self
        if precision is Precision.YEAR:
            return PartialDate(self.year)
        return PartialDate(self.year, self.month)

    def as_date(self) -> datetime.date:
        if self.precision is not Precision.DAY:
            raise InvalidDate(f"{self} has no day component")
        return datetime.date(self.year, self.month, self.day)

    def sort_key(self) -> tuple[int, int, int]:
        return (self.year, self.month or 0, self.day or 0)

    def __str__(self) -> str:
        if self.day is not None:
            return f"{self.year:04d}-{self.month:02d}-{self.day:02d}"
        if self.month is not None:
            return f"{self.year:04d}-{self.month:02d}"
        return f"{self.year:04d}"


def parse_partial_date(text: str) -> PartialDate:
    """Parse exactly "YYYY", "YYYY-MM", or "YYYY-MM-DD".

    Raises InvalidDate on any other shape, out-of-range components, and
    nonexistent calendar days (leap years respected).
    """
    match = _DATE_RE.match(text)
    if match is None:
        raise InvalidDate(f"not a partial date: {text!r}")
    year, month, day = match.groups()
    return PartialDate(
        int(year),
        int(month) if month is not None else None,
        int(day) if day is not None else None,
    )


@dataclass(frozen=True, slots=True)
class TimeSpan:
    """Signed calendar interval at year, month, or day precision.

    Components are the non-negative magnitude; `negative` carries the sign.
    Rendering includes zeros down to the precision ("P2Y0M5D", never
    "P2Y5D") so strings parse back without ambiguity.
    """

    negative: bool
    years: int
    months: int | None = None
    days: int | None = None

    def __post_init__(self) -> None:
        if self.years < 0:
            raise ValueError("years must be >= 0")
        if self.months is not None and not 0 <= self.months <= 11:
            raise ValueError("months must be in 0-11")
        if self.days is not None and not 0 <= self.days <= 30:
            raise ValueError("days must be in 0-30")
        if self.days is not None and self.months is None:
            raise ValueError("days require months")
        if self.negative and self.is_zero:
            raise ValueError("zero duration cannot be negative")

    @property
    def precision(self) -> Precision:
        if self.days is not None:
            return Precision.DAY
        if self.months is not None:
            return Precision.MONTH
        return Precision.YEAR

    @property
    def is_zero(self) -> bool:
        return self.years == 0 and not self.months and not self.days

    def __neg__(self) -> "TimeSpan":
        if self.is_zero:
            return self
        return TimeSpan(not self.negative, self.years, self.months, self.days)

    def __str__(self) -> str:
        sign = "-" if self.negative else ""
        body = f"P{self.years}Y"
        if self.months is not None:
            body += f"{self.months}M"
        if self.days is not None:
            body += f"{self.days}D"
        return sign + body

    def expand_from(self, earlier: datetime.date) -> datetime.date:
        """Re-expand the magnitude on the calendar from the interval's
        earlier endpoint and return the later endpoint.

        Months are added first; a day-of-month that overflows the target
        month rolls forward into the following month. Then the day component
        is added. For spans produced by compute_timespan this reconstructs
        the other endpoint exactly. (Expansion anchored at the later
        endpoint cannot be exact in general: distinct earlier dates can sit
        at the same calendar distance before one later date.)
        """
        total_months = self.years * 12 + (self.months or 0)
        index = earlier.year * 12 + (earlier.month - 1) + total_months
        year, month = divmod(index, 12)
        rolled = datetime.date(year, month + 1, 1) + datetime.timedelta(days=earlier.day - 1)
        return rolled + datetime.timedelta(days=self.days or 0)


def parse_timespan(text: str) -> TimeSpan:
    """Parse the canonical rendering produced by str(TimeSpan)."""
    match = _SPAN_RE.match(text)
    if match is None:
        raise ValueError(f"not a timespan: {text!r}")
    sign, years, months, days = match.groups()
    return TimeSpan(
        sign == "-",
        int(years),
        int(months) if months is not None else None,
        int(days) if days is not None else None,
    )


_MONTH_DAYS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def _days_in_month(year: int, month: int) -> int:
    if month == 2 and year % 4 == 0 and (year % 100 != 0 or year % 400 == 0):
        return 29
    return _MONTH_DAYS[month - 1]


def compute_timespan(citing_date: PartialDate, cited_date: PartialDate) -> TimeSpan:
    """Calendar interval from the cited date to the citing date, at the
    coarser of the two precisions; negative when the citing date precedes
    the cited date. Total over valid inputs. Hot path: runs once per
    citation during exports, so it avoids intermediate allocations.
    """
    a_year, a_month, a_day = citing_date.year, citing_date.month, citing_date.day
    b_year, b_month, b_day = cited_date.year, cited_date.month, cited_date.day

    if a_month is None or b_month is None:
        return TimeSpan(a_year < b_year, abs(a_year - b_year))

    if a_day is None or b_day is None:
        a_total = a_year * 12 + a_month
        b_total = b_year * 12 + b_month
        total = abs(a_total - b_total)
        return TimeSpan(a_total < b_total, total // 12, total % 12)

    negative = (a_year, a_month, a_day) < (b_year, b_month, b_day)
    if negative:
        later_y, later_m, later_d = b_year, b_month, b_day
        earlier_y, earlier_m, earlier_d = a_year, a_month, a_day
    else:
        later_y, later_m, later_d = a_year, a_month, a_day
        earlier_y, earlier_m, earlier_d = b_year, b_month, b_day

    days = later_d - earlier_d
    borrow_y, borrow_m = later_y, later_m
    borrowed = 0
    while days < 0:
        if borrow_m > 1:
            borrow_m -= 1
        else:
            borrow_y -= 1
            borrow_m = 12
        days += _days_in_month(borrow_y, borrow_m)
        borrowed += 1
    months = later_m - earlier_m - borrowed
    years = later_y - earlier_y
    if months < 0:
        months += 12
        years -= 1
    return TimeSpan(negative, years, months, days)
