"""Parameters of the interaction grids.

Classes:
    GridFrame: Orientation of the grid axes.
    GridSpec: Size, resolution and orientation of a grid.
"""

import enum

from pydantic import BaseModel, ConfigDict, Field, field_validator


class GridFrame(str, enum.Enum):
    """Grid orientation."""

    WORLD = "world"
    HEADING = "heading"


class GridSpec(BaseModel):
    """Square grid centered on the primary pedestrian.

    Attributes:
        cells_per_side (int): Even number of cells along each axis.
        resolution (float): Cell side, m.
        frame (GridFrame): World axes, or axes aligned with the primary's velocity.
    """

    model_config = ConfigDict(frozen=True)
    cells_per_side: int = Field(default=16, gt=0)
    resolution: float = Field(default=0.6, gt=0)
    frame: GridFrame = GridFrame.WORLD

    @field_validator("cells_per_side")
    @classmethod
    def check_even(cls, value: int) -> int:
        """The primary sits on a cell corner, so the side must be even.

        Args:
            value (int): Proposed cell count.

        Returns:
            int: The cell count.

        Raises:
            ValueError: For an odd count.
        """
        if value % 2:
            raise ValueError(f"cells_per_side must be even, got {value}")
        return value

    @property
    def half_extent(self) -> float:
        """Distance from the center to the grid border, m."""
        return self.cells_per_side * self.resolution / 2.0
