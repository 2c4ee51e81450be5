"""
CSV output for result rows.
"""
import logging
import sys
from typing import Optional, Sequence, Type

import pandas as pd
from pydantic import BaseModel

logger = logging.getLogger("data_handler")

FLOAT_FORMAT = "%.17g"


class DataHandler:
    """Turns result rows into CSV text and writes it to a file or standard output."""

    def __init__(self, timing: bool = True):
        """
        Initialize the data handler.

        Args:
            timing: Keep the time_ms column; when False it is written blank
        """
        self.timing = timing

    def rows_to_dataframe(self, rows: Sequence[BaseModel], model: Type[BaseModel]) -> pd.DataFrame:
        """
        Build a frame with one column per model field, in declaration order.

        Integer fields become nullable so missing values stay blank instead of
        turning the column into floats.
        """
        columns = list(model.model_fields)
        df = pd.DataFrame([row.model_dump() for row in rows], columns=columns)
        for name, info in model.model_fields.items():
            if info.annotation in (int, Optional[int]):
                df[name] = df[name].astype("Int64")
        if not self.timing and "time_ms" in df.columns:
            df["time_ms"] = None
        return df

    def dataframe_to_csv(self, df: pd.DataFrame) -> str:
        return df.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")

    def save_rows(self, rows: Sequence[BaseModel], model: Type[BaseModel], output_file: Optional[str] = None) -> str:
        """
        Write rows as CSV.

        Args:
            rows: Result rows
            model: Row schema (fixes the header)
            output_file: Path to save to; standard output when None

        Returns:
            The CSV text
        """
        text = self.dataframe_to_csv(self.rows_to_dataframe(rows, model))
        if output_file is None:
            sys.stdout.write(text)
            sys.stdout.flush()
        else:
            try:
                with open(output_file, "w", newline="") as f:
                    f.write(text)
                logger.info(f"Saved {len(rows)} rows to {output_file}")
            except OSError as e:
                logger.error(f"Error saving CSV: {str(e)}")
                raise
        return text
