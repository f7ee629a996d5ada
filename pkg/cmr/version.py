"The current cmr version number"
cmr_version = "0.1.0"
