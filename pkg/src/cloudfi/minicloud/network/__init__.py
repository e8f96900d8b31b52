"""Network sub-system: networks, subnets, routers, ports, security groups, floating IPs."""
