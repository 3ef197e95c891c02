"""Exception taxonomy shared across the workbench.

Configuration problems are reported as diagnostics (see report.validate_config),
not exceptions; the classes here signal bad data or bad arguments at runtime.
"""


class WealthsimError(Exception):
    """Base class for all workbench errors."""


# --- dataset ingestion ---


class MissingColumn(WealthsimError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"missing column: {column}")


class NonNumericValue(WealthsimError):
    def __init__(self, row: int, column: str, value: str):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(f"row {row}, column {column}: non-numeric value {value!r}")


class NonPositiveWeight(WealthsimError):
    def __init__(self, row: int, weight: float):
        self.row = row
        super().__init__(f"row {row}: weight must be > 0, got {weight}")


class BadImplicateIndex(WealthsimError):
    def __init__(self, message: str):
        super().__init__(message)


class EmptyPopulation(WealthsimError):
    pass


# --- synthetic generation ---


class InvalidSpec(WealthsimError):
    pass


class InvalidFloor(WealthsimError):
    pass


# --- correction pipeline ---


class UnknownCountry(WealthsimError):
    def __init__(self, country: str):
        self.country = country
        super().__init__(f"country {country!r} has no household-count target")


class InvalidTheta(WealthsimError):
    pass


class TooFewObservations(WealthsimError):
    pass


class ObservationBelowThreshold(WealthsimError):
    pass


class EmptyGap(WealthsimError):
    pass


class NonPositiveNetWealth(WealthsimError):
    pass


class ZeroSurveyAggregate(WealthsimError):
    def __init__(self, country: str, category: str):
        self.country = country
        self.category = category
        super().__init__(
            f"{country}/{category}: survey aggregate is zero but a positive "
            "national-accounts target exists"
        )


# --- weighted statistics ---


class EmptySeries(WealthsimError):
    pass


class BadProbability(WealthsimError):
    pass


class ZeroTotal(WealthsimError):
    pass


class ZeroTotalPayments(WealthsimError):
    pass


class LengthMismatch(WealthsimError):
    pass


# --- tax engine / goal evaluation ---


class InvalidDesign(WealthsimError):
    pass


class MissingDecileShares(WealthsimError):
    pass


class NonPositiveShare(WealthsimError):
    pass
