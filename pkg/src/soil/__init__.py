from soil.grid import (
    NodeState,
    TerrainGrid,
    new_grid,
    height_at,
    dump_grid,
    write_grid_csv
)
from soil.laws import bekker_pressure, node_pressure, shear_limit, janosi_shear
from soil.patches import ContactPatch, detect_patches
from soil.contact import ContactSample, Wrench, step_contact, resultant_wrench
