# Keycast: multicast key dissemination workbench
