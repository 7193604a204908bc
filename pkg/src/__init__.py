# Robust consensus ranking toolkit
