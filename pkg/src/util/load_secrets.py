import json
import os
import re

import hvac

PLACEHOLDER_PATTERN = re.compile(r"\{\{([^}]+)\}\}")
ENV_PREFIX = "env:"


class SecretResolutionError(ValueError):
    """A placeholder could not be resolved."""


def find_placeholders(configs):
    """Return the set of placeholder bodies found anywhere in the config."""
    return set(PLACEHOLDER_PATTERN.findall(json.dumps(configs)))


def load_vault_secrets(secret_paths, vault_addr, role_id, secret_id, ns, verify=True):

    if not (vault_addr and role_id and secret_id and ns):
        raise SecretResolutionError("Vault address, Role ID, Secret ID, and namespace must be provided.")

    client = hvac.Client(url=vault_addr, namespace=ns, verify=verify)
    client.auth.approle.login(role_id=role_id, secret_id=secret_id)

    all_secrets = {}
    for secret_path in sorted(secret_paths):
        mount, path = secret_path.split('/', 1)
        secrets = client.secrets.kv.v2.read_secret_version(mount_point=mount, path=path)
        all_secrets.update(secrets['data']['data'])

    client.auth.token.revoke_self()

    return all_secrets


def env_secrets(placeholders, environ=None):
    """Resolve `env:NAME` placeholders from the environment."""
    environ = os.environ if environ is None else environ
    resolved = {}
    for placeholder in placeholders:
        name = placeholder[len(ENV_PREFIX):].strip()
        if name not in environ:
            raise SecretResolutionError(f"Environment variable {name} referenced in config is not set")
        resolved[placeholder] = environ[name]
    return resolved


def add_secrets_from_vault(vault_addr, role_id, secret_id, ns, kv_paths, verify=True):

    if not kv_paths:
        return {}

    base_paths = set(get_base_path(path) for path in kv_paths)
    secrets = load_vault_secrets(base_paths, vault_addr, role_id, secret_id, ns, verify=verify)

    placeholders_dict = {}
    for placeholder in kv_paths:
        key = placeholder.split('/')[-1]
        if key not in secrets:
            raise SecretResolutionError(f"Vault secret {placeholder} not found")
        placeholders_dict[placeholder] = secrets[key]
    return placeholders_dict


def get_base_path(path):
    # Everything up to and including the last '/'
    last_slash_index = path.rfind('/')
    if last_slash_index != -1:
        return path[:last_slash_index + 1]
    return path


def replace_placeholders(data, mapping):
    """
    Recursively replace placeholders in the JSON data with values from the mapping.

    Args:
        data (dict or list): The JSON data to process.
        mapping (dict): The dictionary with placeholder mappings.

    Returns:
        dict or list: The updated JSON data with placeholders replaced.
    """
    if isinstance(data, dict):
        return {k: replace_placeholders(v, mapping) for k, v in data.items()}
    elif isinstance(data, list):
        return [replace_placeholders(item, mapping) for item in data]
    elif isinstance(data, str):
        return PLACEHOLDER_PATTERN.sub(lambda m: str(mapping.get(m.group(1), m.group(0))), data)
    else:
        return data
