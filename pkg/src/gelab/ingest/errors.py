"""Ingest-side error types."""


class IngestError(Exception):
    pass


class HttpError(IngestError):
    def __init__(self, status: int, url: str, retry_after: float | None = None):
        self.status = status
        self.url = url
        self.retry_after = retry_after
        super().__init__(f"HTTP {status} from {url}")


class ParseError(IngestError):
    def __init__(self, field_path: str, message: str):
        self.field_path = field_path
        super().__init__(f"{field_path}: {message}")


class UnknownItem(IngestError):
    pass


class SchemaError(IngestError):
    def __init__(self, path, row: int | None, message: str):
        self.path = path
        self.row = row
        where = f"{path}" + (f" row {row}" if row is not None else "")
        super().__init__(f"{where}: {message}")


class DuplicateKey(SchemaError):
    pass


class NonPositivePrice(SchemaError):
    pass


class EmptySeries(IngestError):
    pass
