"""Exception types. Every error carries a stable machine-readable ``code``."""


class U2Error(ValueError):
    code = "error"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out


class EmptyDescriptor(U2Error):
    code = "empty_descriptor"


class NegativeSymmetricDegree(U2Error):
    code = "negative_symmetric_degree"

    def __init__(self, a):
        super().__init__(f"summand {a} has negative symmetric degree", summand=a)
        self.a = a


class MalformedInput(U2Error):
    code = "malformed_input"


class BadLength(U2Error):
    code = "bad_length"


class LengthMismatch(U2Error):
    code = "length_mismatch"


class ZeroVector(U2Error):
    code = "zero_vector"


class NotSkewHermitian(U2Error):
    code = "not_skew_hermitian"


class InvalidRay(U2Error):
    code = "invalid_ray"


class NotGeneric(U2Error):
    code = "not_generic"


class NotUniform(U2Error):
    code = "not_uniform"


class MomentHitsZero(U2Error):
    code = "moment_hits_zero"


class DiagonalRay(U2Error):
    code = "diagonal_ray_unsupported"


class OnBoundary(U2Error):
    code = "on_boundary"


class OutsideImage(U2Error):
    code = "outside_image"


class CriticalRay(U2Error):
    code = "critical_ray"

    def __init__(self, witnesses):
        witnesses = tuple(witnesses)
        super().__init__(
            "ray is critical; witnesses " + ", ".join(f"({a},{j})" for a, j in witnesses),
            witnesses=[list(w) for w in witnesses],
        )
        self.witnesses = witnesses


class EmptySide(U2Error):
    code = "empty_side"


class ProbeOutsideWedge(U2Error):
    code = "probe_outside_wedge"


class OutOfRange(U2Error):
    code = "out_of_range"


class TooSmall(U2Error):
    code = "too_small"


class MaxResamplesExceeded(U2Error, RuntimeError):
    code = "max_resamples_exceeded"
