"""Exception types shared across the harness.

Operational failures derive from GascError so the CLI can map them to exit
code 1; anything else escaping a command is a bug.
"""


class GascError(Exception):
    """Base class for operational errors raised by this package."""


class SchemaError(GascError):
    """A structured document violates its schema; ``path`` names the field."""

    def __init__(self, path, message=""):
        detail = f": {message}" if message else ""
        super().__init__(f"schema violation at {path!r}{detail}")
        self.path = path


# --- construction-language front end ---------------------------------------


class GeoformError(GascError):
    """Base for diagnostics produced by the construction-language front end."""


class LexError(GeoformError):
    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UndefinedName(GeoformError):
    def __init__(self, name, context=""):
        suffix = f" ({context})" if context else ""
        super().__init__(f"undefined name {name!r}{suffix}")
        self.name = name


class Redefinition(GeoformError):
    def __init__(self, name, context=""):
        suffix = f" ({context})" if context else ""
        super().__init__(f"name {name!r} defined more than once{suffix}")
        self.name = name


class ArityError(GeoformError):
    pass


class MissingConjecture(GeoformError):
    def __init__(self, message="no prove block found"):
        super().__init__(message)


# --- corpus -----------------------------------------------------------------


class ManifestNotFound(GascError):
    pass


class ManifestSchemaError(GascError):
    pass


class UnknownId(GascError):
    def __init__(self, problem_id):
        super().__init__(f"no corpus entry with id {problem_id!r}")
        self.problem_id = problem_id


# --- adapters ----------------------------------------------------------------


class AdapterSchemaError(GascError):
    pass


class DuplicateAdapterName(GascError):
    def __init__(self, name):
        super().__init__(f"adapter name {name!r} declared more than once")
        self.name = name


class BadPattern(GascError):
    def __init__(self, pattern, reason):
        super().__init__(f"classification pattern {pattern!r} does not compile: {reason}")
        self.pattern = pattern


# --- runner -------------------------------------------------------------------


class SpawnFailure(GascError):
    pass


class OutDirNotWritable(GascError):
    pass


class NoRunnableAdapters(GascError):
    def __init__(self, message="no adapter executable is present on this host"):
        super().__init__(message)


class MissingRunStart(GascError):
    def __init__(self, message="event log contains no run_started event"):
        super().__init__(message)


# --- scoring ------------------------------------------------------------------


class UnknownProblemId(GascError):
    def __init__(self, problem_id):
        super().__init__(f"record references problem {problem_id!r} absent from the corpus")
        self.problem_id = problem_id


class InvalidMeasurement(GascError):
    pass


class ZeroSize(GascError):
    def __init__(self, message="proof size must be positive"):
        super().__init__(message)
