"""Exception hierarchy shared by every module.

Each class carries a short machine-readable ``code`` that the command line
front end copies into its JSON error object.
"""


class GrassmannISDError(Exception):
    code = "error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context


class InvalidArgument(GrassmannISDError, ValueError):
    code = "invalid-argument"


class Unsatisfiable(GrassmannISDError):
    code = "unsatisfiable"


class DegenerateCode(GrassmannISDError):
    code = "degenerate"


class UnsupportedGraph(GrassmannISDError):
    code = "unsupported-graph"


class BudgetExceeded(GrassmannISDError):
    code = "budget-exceeded"
