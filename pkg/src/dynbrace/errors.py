"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or inadmissible input data (bad table, unknown spec, non-closed family...)."""


class ResourceCapError(RuntimeError):
    """An enumeration or closure would exceed the configured cap."""

    def __init__(self, required: int, cap: int, what: str = "subsets"):
        self.required = required
        self.cap = cap
        super().__init__(f"would need {required} {what}, above the cap of {cap}")
