import os

DEFAULT_DIM_CAP = 4096


def dimension_cap(cap: int | None = None) -> int:
    """Matrix side cap: explicit argument, else ``HYPERQUASI_CAP``, else 4096."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("HYPERQUASI_CAP")
    return int(env) if env else DEFAULT_DIM_CAP


class DimensionCapExceeded(ValueError):
    """A dense matrix or tensor would exceed the configured dimension cap."""

    def __init__(self, what: str, dim: int, cap: int):
        super().__init__(f"{what} has dimension {dim}, above the cap of {cap} (set --cap or HYPERQUASI_CAP)")
        self.dim = dim
        self.cap = cap
