"""Error taxonomy shared by the solvers and the command line front end.

The command line maps these to process exit codes: InputError exits 1,
ResourceCapError exits 2, ContractError exits 3.
"""


class InputError(ValueError):
    """Malformed or out-of-range input: bad JSON, width mismatch, bad index."""


class ResourceCapError(RuntimeError):
    """A configured resource cap would be exceeded.

    Messages name the cap and, where one exists, the command line flag
    that raises it.
    """


class ContractError(RuntimeError):
    """A documented precondition was violated by the caller."""
