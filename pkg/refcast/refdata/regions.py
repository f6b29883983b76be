"""
This module contains the:

- **RegionEnum:** World regions used to describe reference-class projects.

- **ProjectTypeEnum:** Purposes of a large dam project.

- **COUNTRY_REGIONS:** The fixed ISO-3166 alpha-3 to region lookup table.

Only North America and South Asia enter published models as dummies; the
other regions are descriptive.
"""

from enum import Enum
from typing import Dict


class RegionEnum(Enum):
    """World regions."""

    NORTH_AMERICA = "north_america"
    SOUTH_ASIA = "south_asia"
    LATIN_AMERICA = "latin_america"
    AFRICA = "africa"
    EAST_ASIA_PACIFIC = "east_asia_pacific"
    EUROPE_CENTRAL_ASIA = "europe_central_asia"
    MIDDLE_EAST = "middle_east"


class ProjectTypeEnum(Enum):
    """Dam project purposes."""

    HYDROPOWER = "hydropower"
    IRRIGATION = "irrigation"
    FLOOD_CONTROL = "flood_control"
    WATER_SUPPLY = "water_supply"
    MULTIPURPOSE = "multipurpose"


def _table(region: RegionEnum, codes: str) -> Dict[str, RegionEnum]:
    return {code: region for code in codes.split()}


COUNTRY_REGIONS: Dict[str, RegionEnum] = {
    **_table(RegionEnum.NORTH_AMERICA, "USA CAN"),
    **_table(RegionEnum.SOUTH_ASIA, "PAK IND BGD NPL LKA BTN AFG"),
    **_table(
        RegionEnum.LATIN_AMERICA,
        "MEX GTM HND SLV NIC CRI PAN COL VEN ECU PER BOL BRA PRY URY ARG CHL "
        "DOM HTI JAM GUY SUR",
    ),
    **_table(
        RegionEnum.AFRICA,
        "MAR DZA TUN LBY SDN ETH KEN UGA TZA RWA BDI COD COG CMR NGA GHA CIV "
        "SEN MLI GIN SLE LBR BFA NER TCD ZMB ZWE MOZ MWI AGO NAM BWA ZAF LSO "
        "SWZ MDG",
    ),
    **_table(
        RegionEnum.EAST_ASIA_PACIFIC,
        "CHN JPN KOR PRK MNG TWN PHL VNM LAO KHM THA MMR MYS IDN PNG AUS NZL FJI",
    ),
    **_table(
        RegionEnum.EUROPE_CENTRAL_ASIA,
        "GBR IRL FRA ESP PRT ITA DEU AUT CHE NOR SWE FIN ISL GRC TUR SRB BIH "
        "HRV SVN MKD ALB ROU BGR HUN POL CZE SVK UKR RUS GEO ARM AZE KAZ KGZ "
        "TJK UZB TKM",
    ),
    **_table(RegionEnum.MIDDLE_EAST, "EGY IRN IRQ SYR JOR LBN ISR SAU YEM OMN ARE"),
}


def region_of(country: str) -> RegionEnum:
    """Look up the region of an ISO-3166 alpha-3 country code.

    Raises
    ------
    ValueError
        If the code is not in the lookup table.
    """
    try:
        return COUNTRY_REGIONS[country.strip().upper()]
    except KeyError:
        raise ValueError(f'unknown country code "{country}"')
