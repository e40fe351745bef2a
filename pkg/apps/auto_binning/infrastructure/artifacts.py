from pathlib import Path

from loguru import logger


class ArtifactSet:
    """
    Output files of one command, removed again if the command fails.

    Use as a context manager: every path handed out by `path` is deleted when
    the block exits with an exception, and the output directory too when it
    was created here and is left empty.
    """
    def __init__(self, directory: Path) -> None:
        self.directory = Path(directory)
        self.created_directory = not self.directory.exists()
        self.paths: list[Path] = []

    def path(self, name: str) -> Path:
        """Register and return `directory / name`."""
        path = self.directory / name
        self.paths.append(path)
        return path

    def __enter__(self) -> "ArtifactSet":
        self.directory.mkdir(parents=True, exist_ok=True)
        return self

    def __exit__(self, exception_type, exception_value, exception_traceback) -> None:
        if exception_type is None:
            return

        for path in self.paths:
            path.unlink(missing_ok=True)
        if self.created_directory and self.directory.exists() and not any(self.directory.iterdir()):
            self.directory.rmdir()
        logger.warning(f"Removed partial outputs in {self.directory}")
