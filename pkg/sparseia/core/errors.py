# coding: utf-8
"""
Exceptions raised by sparseia and the error codes used to classify them.
"""

##############################
# Exceptions
##############################


class ErrorCode(object):
    """
    Error code to classify the errors
    """

    ERROR = 'Error'
    CONTRACT = 'Contract'
    CONFIG = 'Config'
    DATA_FILE = 'Data_file'
    PARSE = 'Parse'
    VALIDATION = 'Validation'


class ExitCode(object):
    """
    Exit codes of the command line interface.
    """

    SUCCESS = 0
    CONFIG = 1
    IO = 2
    VERIFICATION = 3


class SparseIAError(Exception):
    """
    Base class for the errors in sparseia
    """

    ERROR_CODE = ErrorCode.ERROR
    EXIT_CODE = ExitCode.CONFIG

    def __init__(self, msg):
        super(SparseIAError, self).__init__(msg)
        self.msg = msg

    def to_dict(self):
        return dict(error_code=self.ERROR_CODE, msg=self.msg)


class ContractViolationError(SparseIAError, ValueError):
    """
    Exception raised when an operation is called with arguments violating its preconditions,
    e.g. vectors of mismatching dimensions or negative sparsification budgets.
    """

    ERROR_CODE = ErrorCode.CONTRACT


class ConfigError(SparseIAError):
    """
    Exception raised for unknown keys or invalid values in the experiment configuration.
    """

    ERROR_CODE = ErrorCode.CONFIG


class DataFileError(SparseIAError):
    """
    Exception raised when the data files cannot be found or read.
    """

    ERROR_CODE = ErrorCode.DATA_FILE
    EXIT_CODE = ExitCode.IO


class IdxParseError(DataFileError):
    """
    Base class for the errors found while parsing a file in IDX format.
    """

    ERROR_CODE = ErrorCode.PARSE


class BadMagicError(IdxParseError):
    """
    Exception raised if the magic number in the IDX header is not the expected one.
    """


class TruncatedFileError(IdxParseError):
    """
    Exception raised if the IDX file is shorter than declared in its header.
    """


class CountMismatchError(IdxParseError):
    """
    Exception raised if the item counts of an IDX file disagree with its header or with the companion file.
    """


class LabelValueError(IdxParseError):
    """
    Exception raised if a label is outside the allowed range of classes.
    """

    ERROR_CODE = ErrorCode.VALIDATION
