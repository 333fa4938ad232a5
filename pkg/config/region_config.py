REGION_CONFIG = {}

# Census-style grouping. D.C., Maryland and Delaware sit in the Northeast;
# New York City is its own CDC jurisdiction.
REGION_CONFIG["regions"] = {
    "West": [
        "California", "Arizona", "New Mexico", "Nevada", "Utah", "Colorado",
        "Wyoming", "Oregon", "Idaho", "Washington", "Montana",
    ],
    "Midwest": [
        "Missouri", "Kansas", "Illinois", "Indiana", "Ohio", "Nebraska", "Iowa",
        "Michigan", "South Dakota", "Wisconsin", "Minnesota", "North Dakota",
    ],
    "Northeast": [
        "District of Columbia", "Maryland", "Delaware", "New Jersey", "Pennsylvania",
        "New York City", "New York", "Connecticut", "Rhode Island",
        "Massachusetts", "Vermont", "New Hampshire", "Maine",
    ],
    "South": [
        "Texas", "Florida", "Louisiana", "Mississippi", "Alabama", "Georgia",
        "South Carolina", "Arkansas", "Oklahoma", "Tennessee", "North Carolina",
        "Kentucky", "Virginia", "West Virginia",
    ],
    "Non-Contiguous": ["Alaska", "Hawaii", "Puerto Rico"],
}

REGION_CONFIG["aliases"] = {
    "washington d.c.": "District of Columbia",
    "washington dc": "District of Columbia",
    "d.c.": "District of Columbia",
}

REGION_CONFIG["ignore"] = ["United States"]

REGION_CONFIG["whole_us"] = {
    "name": "Whole-US",
    "jurisdiction": "US",
}
