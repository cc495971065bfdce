from enum import Enum

class SchemeKind(str, Enum):
    VPS1 = "VPS1"
    VPS1a = "VPS1a"
    VPS2 = "VPS2"
    DIRK2 = "DIRK2"
    PM1 = "PM1"
    PM2 = "PM2"
