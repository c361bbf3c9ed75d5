"""
Reports Module
Tabulates per-polynomial check outcomes and exports reports as JSON or CSV
"""

import json
import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional

import pandas as pd

logger = logging.getLogger(__name__)

ROW_COLUMNS = ["polynomial", "value", "outcome", "detail"]


class ReportProcessor:
    """Turn check results into tables and stable text"""

    @staticmethod
    def to_frame(rows: List[Dict[str, Any]]) -> pd.DataFrame:
        """
        Build the per-member table of a check

        Args:
            rows: One dict per corpus member (polynomial, value, outcome, detail)

        Returns:
            DataFrame with the row columns in fixed order
        """
        df = pd.DataFrame(rows, columns=ROW_COLUMNS)
        df["detail"] = df["detail"].fillna("")
        logger.debug(f"Tabulated {len(df)} check rows")
        return df

    @staticmethod
    def summarize(df: pd.DataFrame) -> Dict[str, Any]:
        """
        Summary counts of a check table

        Args:
            df: Table from to_frame

        Returns:
            Member count, outcome counts and the finite value range
        """
        if df.empty:
            return {"members": 0, "outcomes": {}, "failures": 0, "min_value": None, "max_value": None}

        finite = [Fraction(v) for v in df["value"] if v not in ("inf", "-inf")]
        outcomes = df["outcome"].value_counts().sort_index()
        return {
            "members": len(df),
            "outcomes": {str(k): int(v) for k, v in outcomes.items()},
            "failures": int((df["outcome"] == "fail").sum()),
            "min_value": str(min(finite)) if finite else None,
            "max_value": str(max(finite)) if finite else None,
        }

    @staticmethod
    def render_json(payload: Any) -> str:
        """Key-ordered JSON text, stable across runs"""
        return json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"

    @staticmethod
    def export_to_json(payload: Dict[str, Any], filepath: str, df: Optional[pd.DataFrame] = None) -> bool:
        """
        Write a report, with its per-member table when given, as key-ordered JSON

        Args:
            payload: Report fields
            filepath: Output file path
            df: Table from to_frame, stored under "rows"

        Returns:
            Success status
        """
        document = dict(payload)
        if df is not None:
            document["rows"] = df.to_dict(orient="records")
        try:
            with open(filepath, "w") as f:
                f.write(ReportProcessor.render_json(document))
            logger.info(f"Report with {len(document.get('rows', []))} rows exported to {filepath}")
            return True
        except OSError as e:
            logger.error(f"Error exporting report: {str(e)}")
            return False

    @staticmethod
    def export_to_csv(df: pd.DataFrame, filepath: str) -> bool:
        """
        Export DataFrame to CSV file

        Args:
            df: DataFrame to export
            filepath: Output file path

        Returns:
            Success status
        """
        try:
            df.to_csv(filepath, index=False)
            logger.info(f"Table exported to {filepath}")
            return True

        except OSError as e:
            logger.error(f"Error exporting table: {str(e)}")
            return False
