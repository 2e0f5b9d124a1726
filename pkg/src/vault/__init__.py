# Vault module
