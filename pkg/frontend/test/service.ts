/** Spawn a real proofkit service for integration tests. */

import { spawn, type ChildProcess } from 'node:child_process';

export interface RunningService {
  url: string;
  stop(): Promise<void>;
}

export async function startService(): Promise<RunningService> {
  const port = 20000 + Math.floor(Math.random() * 20000);
  const child: ChildProcess = spawn('python3', ['-m', 'proofkit', 'serve', '--port', String(port)], {
    stdio: ['ignore', 'pipe', 'pipe'],
  });
  let stderr = '';
  child.stderr?.on('data', (chunk) => { stderr += String(chunk); });

  const url = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 20000;
  for (;;) {
    if (child.exitCode !== null) {
      throw new Error(`service exited early (code ${child.exitCode}): ${stderr}`);
    }
    try {
      const response = await fetch(`${url}/api/listProofs`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: '{}',
      });
      if (response.ok) break;
    } catch {
      // not accepting connections yet
    }
    if (Date.now() > deadline) {
      child.kill();
      throw new Error(`service did not come up on ${url}: ${stderr}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  return {
    url,
    stop: () => new Promise((resolve) => {
      child.once('exit', () => resolve());
      child.kill('SIGTERM');
      setTimeout(() => { child.kill('SIGKILL'); resolve(); }, 5000).unref();
    }),
  };
}
