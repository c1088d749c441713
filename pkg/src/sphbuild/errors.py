class InvariantViolation(RuntimeError):
    """A structural fact that must hold for valid inputs failed.

    ``witness`` is a JSON-ready dict that lets the failure be replayed.
    """

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = witness or {}

    def to_json(self) -> dict:
        return {"message": str(self), "witness": self.witness}
