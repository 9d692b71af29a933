from hypothesis import settings

# Property tests share CPU with quadrature-heavy cases; wall-clock deadlines
# would flake, example counts are pinned per test where they matter.
settings.register_profile("suite", deadline=None)
settings.load_profile("suite")
