"""Exception types shared across the package."""


class HybridLineError(Exception):
    pass


class NotCanonicalizable(HybridLineError):
    """A boolean combination could not be resolved to a finite description."""


class OverlapError(HybridLineError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ParseError(HybridLineError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class SearchExhausted(HybridLineError):
    """A bounded search ended without a certificate; the claim is unverified, not false."""


class NoFiniteN(HybridLineError):
    pass


class NotOneSideClosed(HybridLineError):
    pass


class LabelError(HybridLineError):
    pass


class BoundExhausted(HybridLineError):
    pass


class SpecInvalid(HybridLineError):
    pass
