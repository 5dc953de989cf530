"""Exception hierarchy shared across the package.

Every error raised by library code derives from :class:`EmofaceError` so
callers (CLI, HTTP layer) can map failures to exit codes and response
envelopes by class name.
"""

from __future__ import annotations


class EmofaceError(Exception):
    """Base class for all library errors."""

    @property
    def code(self) -> str:
        """Stable snake_case identifier derived from the class name."""
        name = type(self).__name__
        out = []
        for i, ch in enumerate(name):
            if ch.isupper() and i > 0:
                out.append("_")
            out.append(ch.lower())
        return "".join(out)


class MalformedLine(EmofaceError):
    """A word-vector file line does not match the inferred dimensionality."""

    def __init__(self, line_no: int, message: str = ""):
        self.line_no = line_no
        super().__init__(message or f"malformed vector line {line_no}")


class UnknownWord(EmofaceError):
    """Queried word is not present in the embedding store."""


class EmptyCorpus(EmofaceError):
    """Training requested on a corpus with no items."""


class EmptySplit(EmofaceError):
    """Evaluation requested on an empty split."""


class NoFaceDetected(EmofaceError):
    """The cascade found no face in the input image."""


class DegenerateBox(EmofaceError):
    """A crop box clamps to zero width or height."""


class EmptyDataset(EmofaceError):
    """Dataset build produced zero usable images."""


class BadShape(EmofaceError):
    """Tensor or image shape violates an operation's contract."""


class VersionMismatch(EmofaceError):
    """Serialized bundle carries an unsupported format tag."""


class ChecksumMismatch(EmofaceError):
    """Serialized bundle is corrupt (checksum disagreement)."""


class UnknownUser(EmofaceError):
    """No user record with the given id."""


class EmptyName(EmofaceError):
    """User creation with an empty name."""


class UndecodableImage(EmofaceError):
    """Uploaded bytes are not a decodable PNG/JPEG image."""


class NoPhotoOnProfile(EmofaceError):
    """Post creation requires a prepared profile face."""


class ModelNotLoaded(EmofaceError):
    """Pipeline invoked before its models were loaded."""


class InvalidMapping(EmofaceError):
    """An emotion-to-expression override table is not total or not valid."""
