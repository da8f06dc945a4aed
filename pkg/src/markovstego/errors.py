"""Exception types. Each carries a short machine-greppable ``code``."""


class StegoError(Exception):
    code = "E_STEGO"


class IngestError(StegoError):
    code = "E_INGEST"

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyCorpusError(IngestError):
    code = "E_EMPTY_CORPUS"


class UnknownContext(StegoError):
    code = "E_UNKNOWN_CONTEXT"


class ModelParseError(StegoError):
    code = "E_MODEL_PARSE"

    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"byte offset {offset}: {message}")


class EmptyPool(StegoError):
    code = "E_EMPTY_POOL"


class NotInPool(StegoError):
    code = "E_NOT_IN_POOL"


class DecodeMismatch(StegoError):
    code = "E_DECODE_MISMATCH"

    def __init__(self, message, sentence=None, position=None):
        self.sentence = sentence
        self.position = position
        if sentence is not None:
            message = f"sentence {sentence}, word {position}: {message}"
        super().__init__(message)


class TruncatedPayload(StegoError):
    code = "E_TRUNCATED_PAYLOAD"


class CapacityError(StegoError):
    code = "E_NO_CAPACITY"
