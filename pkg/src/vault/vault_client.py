import os

from src.util.load_secrets import (
    ENV_PREFIX,
    SecretResolutionError,
    add_secrets_from_vault,
    env_secrets,
    find_placeholders,
    replace_placeholders,
)


def resolve_config_secrets(raw_config: dict) -> dict:
    """
    Resolve secret placeholders in configuration.

    `{{env:NAME}}` comes from the environment, `{{kv/data/...}}` from Vault.
    Vault is only contacted when such placeholders exist.

    Args:
        raw_config: Configuration dict with potential placeholders

    Returns:
        Configuration dict with secrets resolved
    """
    placeholders = find_placeholders(raw_config)
    if not placeholders:
        return raw_config

    env_placeholders = {p for p in placeholders if p.startswith(ENV_PREFIX)}
    kv_placeholders = placeholders - env_placeholders

    # env first: the vault section itself may use env placeholders
    config = replace_placeholders(raw_config, env_secrets(env_placeholders))
    if kv_placeholders:
        config = replace_placeholders(config, load_vault_mapping(config, kv_placeholders))
    return config


def get_vault_creds(secret_dir="/vault-secrets"):
    role_id_path = os.path.join(secret_dir, "roleid")
    secret_id_path = os.path.join(secret_dir, "secretid")
    ns_path = os.path.join(secret_dir, "vaultns")

    try:
        with open(role_id_path, "r") as role_id_file, open(secret_id_path, "r") as secret_id_file, \
                open(ns_path, "r") as ns_file:
            role_id = role_id_file.read().strip()
            secret_id = secret_id_file.read().strip()
            ns = ns_file.read().strip()

        return role_id, secret_id, ns
    except FileNotFoundError:
        return None, None, None


def load_vault_mapping(configProp, kv_placeholders):
    vault = configProp.get("vault") or {}
    environment = os.getenv('ENVIRONMENT', 'local').lower()
    if environment == 'local':
        role_id = vault.get("role_id")
        secret_id = vault.get("secret_id")
        ns = vault.get("ns")
    elif environment == 'kob':
        role_id, secret_id, ns = get_vault_creds()
    else:
        raise SecretResolutionError(f"Unknown environment: {environment}")

    vault_addr = vault.get("vault_addr")

    if not (role_id and secret_id and ns and vault_addr):
        raise SecretResolutionError(
            "Config references Vault secrets but vault_addr, role_id, secret_id or ns is missing")
    return add_secrets_from_vault(
        vault_addr, role_id, secret_id, ns, kv_placeholders,
        verify=vault.get("ca_cert", True),
    )
