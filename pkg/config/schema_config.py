SCHEMA_CONFIG = {}

# CDC "Weekly Counts of Deaths by State and Select Causes" layout. With the two
# date columns in front, cause k lands at point-cloud column k + 2.
SCHEMA_CONFIG["cdc_weekly"] = {
    "year": "MMWR Year",
    "week": "MMWR Week",
    "jurisdiction": "Jurisdiction of Occurrence",
    "causes": [
        "All Cause",
        "Natural Cause",
        "Septicemia (A40-A41)",
        "Malignant neoplasms (C00-C97)",
        "Diabetes mellitus (E10-E14)",
        "Alzheimer disease (G30)",
        "Influenza and pneumonia (J09-J18)",
        "Chronic lower respiratory diseases (J40-J47)",
        "Other diseases of respiratory system (J00-J06,J30-J39,J67,J70-J98)",
        "Nephritis, nephrotic syndrome and nephrosis (N00-N07,N17-N19,N25-N27)",
        "Symptoms, signs and abnormal clinical and laboratory findings, not elsewhere classified (R00-R99)",
        "Diseases of heart (I00-I09,I11,I13,I20-I51)",
        "Cerebrovascular diseases (I60-I69)",
        "COVID-19 (U071, Multiple Cause of Death)",
        "COVID-19 (U071, Underlying Cause of Death)",
    ],
    "start_year": 2020,
    "start_week": 1,
    "end_year": 2023,
    "end_week": 39,
}
