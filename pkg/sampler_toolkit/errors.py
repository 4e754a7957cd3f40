'''
errors.py

Exception types raised across the toolkit.

Every deliberate failure derives from ToolkitError so the CLI can map it to an
exit code. Domain and precondition errors are also ValueErrors, so callers that
only know about built-in exceptions still catch them.
'''


class ToolkitError(Exception):
    '''Base class for all errors raised on purpose by the toolkit.'''


class DomainError(ToolkitError, ValueError):
    '''An argument lies outside the domain of the operation.'''


class ConsistencyError(ToolkitError, ArithmeticError):
    '''An internal numerical identity failed beyond its tolerance.'''


class PreconditionError(ToolkitError, ValueError):
    '''
    A bound was requested outside the region where it holds.

    Parameters:
    - condition (str): Short name of the failed check (e.g. 'equal_variance')
    - message (str): Human readable description
    '''

    def __init__(self, condition, message):
        super().__init__(f'{condition}: {message}')
        self.condition = condition


class ConfigError(ToolkitError, ValueError):
    '''An experiment configuration could not be parsed or validated.'''
