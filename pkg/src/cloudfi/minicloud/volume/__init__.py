"""Volume sub-system: block storage volumes and their attachments."""
